#pragma once

#include <array>

#include "hberry/adiabatic.hpp"
#include "hberry/integrator.hpp"
#include "hberry/parameters.hpp"
#include "hberry/quadrature.hpp"
#include "hberry/spectral.hpp"

namespace hberry {

/// Closed-contour integrals whose ν-weighted sum is γ_ν.
struct BerryTerms {
  double plane = 0.0;     // weight (ν_1+½) + (ν_2+½)
  double axial = 0.0;     // weight ν_3+½
  double magnetic = 0.0;  // weight ν_2 − ν_1

  double combine(const FockIndex& nu) const;
};

struct PhaseResult {
  FockIndex nu;
  double T = 0.0;
  double dynamic = 0.0;         // δ_ν = −(1/ħ)∫E_ν dt
  double dynamic_action = 0.0;  // T∫E_ν ds, the unsigned action form
  double berry = 0.0;           // γ_ν
  BerryTerms terms;
};

struct HannayAngles {
  std::array<double, 3> theta{};  // Θ_i = −∂γ_ν/∂ν_i
  BerryTerms terms;
  double solid_angle = 0.0;
  double solid_angle_mismatch = 0.0;  // distance of Θ_1 from −solid_angle, mod 2π
};

/// −(T/ħ)∫_0^1 E_ν(s) ds.
double dynamic_phase(const ParameterLoop& loop, const FockIndex& nu, double T, const QuadratureOptions& opts = {});

BerryTerms berry_terms(const ParameterLoop& loop, const QuadratureOptions& opts = {});

/// Validates the loop, then evaluates the contour form of γ_ν and the dynamic phase at the loop's period.
PhaseResult berry_phase(const ParameterLoop& loop, const FockIndex& nu, const ValidationOptions& validation = {},
                        const QuadratureOptions& opts = {});

/// γ_ν from −∮[Σ_j φ'_j(ν_j+½) + (κ̃c/2ħ) Σ_j σ^(1)_{x_jx_j}] ds.
double berry_phase_from_rates(const ParameterLoop& loop, const FockIndex& nu, const QuadratureOptions& opts = {});

/// Small-nonlinearity form for a ≡ c, written with Ω_nl = √(κ̃a/m) and the κ̃ = 0 frequencies ω_0, Ω_0.
/// Throws InvalidConfig when the a and c schedules differ.
double berry_phase_equal_ac(const ParameterLoop& loop, const FockIndex& nu, const QuadratureOptions& opts = {});

HannayAngles hannay_angles(const ParameterLoop& loop, const ValidationOptions& validation = {},
                           const QuadratureOptions& opts = {});

/// ∮(1 − cosθ) dφ over the curve H(s)/|H(s)|, with φ unwrapped.
double solid_angle(const ParameterLoop& loop, const QuadratureOptions& opts = {});

/// Winding number of the azimuth of H(s) around the polar axis.
int azimuth_winding(const ParameterLoop& loop, const QuadratureOptions& opts = {});

/// Distance of x from the nearest multiple of 2π.
double distance_mod_2pi(double x);

struct PhaseExtraction {
  int mode = 0;  // 0-based germ index
  double T = 0.0;
  double estimate = 0.0;     // unwrapped arg c_k(T) − T∮Ω_k ds
  double closed_form = 0.0;  // ∮φ'_k ds
  double final_modulus = 1.0;
  double max_modulus_deviation = 0.0;  // max_t ||c_k(t)| − 1|
  bool adiabaticity_warning = false;   // max deviation > 10/T
  IntegratorStats stats;
};

/// Integrates a_k from f_k(R(0)) over one period and demodulates c_k(t) = {a_k(t), f_k*(R(t/T))}/(2i).
PhaseExtraction extract_phase_numeric(const ParameterLoop& loop, int mode, double T, const Tolerances& tol = {},
                                      int samples = 1024, const QuadratureOptions& opts = {});

}  // namespace hberry
