#pragma once

#include <array>

#include "hberry/frame.hpp"
#include "hberry/parameters.hpp"
#include "hberry/quadrature.hpp"
#include "hberry/spectral.hpp"

namespace hberry {

/// Exact slow-time derivatives of the scalar combinations the adiabatic formulas consume.
struct ScalarRates {
  double m_rho = 0.0;      // (mρ)'
  double m_omega_a = 0.0;  // (mω_a)'
  double m_Omega3 = 0.0;   // (mΩ_3)'
};

ScalarRates scalar_rates(const ParameterSample& sample, const PhysicalConstants& constants);

struct AdiabaticRates {
  std::array<double, 3> phi_prime{};  // φ'_k
  std::array<double, 3> Phi_prime{};  // Φ'_k = Ω_k(R(s))
};

/// φ'_{1,2} = −(mρ)'/(2mω_a) ± ½(⟨e_φ', e_θ⟩ − ⟨e_θ', e_φ⟩),  φ'_3 = −(mρ)'/(2mΩ_3).
AdiabaticRates geometric_rates(const ParameterLoop& loop, double s);

struct CouplingMatrices {
  CMat3 A_mat = CMat3::Zero();  // α_km, anti-Hermitian, diagonal left at zero
  CMat3 B_mat = CMat3::Zero();  // β_km, symmetric
  double gamma = 0.0;           // √(Ω_3/2ω_a) + √(ω_a/2Ω_3)
  double gamma_tilde = 0.0;     // √(Ω_3/2ω_a) − √(ω_a/2Ω_3)
};

/// Closed-form first-order coupling of the adiabatic germ. Throws Resonance when
/// |Ω_k − Ω_3| < 1e-8·max Ω for k = 1, 2.
CouplingMatrices coupling_matrices(const ParameterLoop& loop, double s);

struct VarianceTrace {
  double trace0 = 0.0;  // Σ σ_xx^(0)
  double trace1 = 0.0;  // Σ σ_xx^(1), the coefficient of 1/T
};

VarianceTrace variance_correction_trace(const ParameterLoop& loop, double s, const FockIndex& nu);

/// σ_xx^(1) = (ħ/4)[C D C_1⁺ + C_1 D C⁺ + c.c.] with C_1 = C Aᵀ + C* Bᵀ and D = diag(2ν+1).
Mat3 variance_correction_matrix(const ParameterLoop& loop, double s, const FockIndex& nu);

/// Densities in s of the three contour integrals making up γ_ν:
///   plane:    [1 − κ̃c/(2mω_a²)] (mρ)'/(2mω_a)
///   axial:    [1 − κ̃c/(2mΩ_3²)] (mρ)'/(2mΩ_3)
///   magnetic: H_3 (H_1H_2' − H_2H_1') / (|H|(H_1² + H_2²)) = cosθ φ'
struct BerryDensity {
  double plane = 0.0;
  double axial = 0.0;
  double magnetic = 0.0;
};

BerryDensity berry_density(const ParameterLoop& loop, double s);

/// γ_ν integrand in the φ'/σ^(1) form: −Σ_j φ'_j(ν_j+½) − (κ̃c/2ħ) Σ_j σ^(1)_{x_jx_j}.
double berry_integrand_from_rates(const ParameterLoop& loop, double s, const FockIndex& nu);

struct AsymptoticPhase {
  double dynamic = 0.0;    // −(T/ħ)∫E_ν dτ
  double geometric = 0.0;  // γ_ν accumulated over the same range
};

/// Phase of the leading-order adiabatic solution accumulated over [s_begin, s_end].
AsymptoticPhase asymptotic_phase(const ParameterLoop& loop, const FockIndex& nu, double T, double s_begin,
                                 double s_end, const QuadratureOptions& opts = {});
inline AsymptoticPhase asymptotic_phase(const ParameterLoop& loop, const FockIndex& nu, double T, double s,
                                        const QuadratureOptions& opts = {}) {
  return asymptotic_phase(loop, nu, T, 0.0, s, opts);
}

}  // namespace hberry
