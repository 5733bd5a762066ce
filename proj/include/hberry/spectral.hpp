#pragma once

#include <array>

#include "hberry/frame.hpp"
#include "hberry/germ.hpp"
#include "hberry/parameters.hpp"

namespace hberry {

/// Instantaneous normal-mode frequencies.
///   omega_c = eH/(mc)
///   omega_a = sqrt(e²H²/(4m²c²) + k̃/m − ρ²)
///   Omega   = (ω_a + ω_c/2, ω_a − ω_c/2, sqrt(k̃/m − ρ²))
///   Omega_nl = (κ̃c/(2mω_a), κ̃c/(2mω_a), κ̃c/(2mΩ_3))
/// Omega[k] is the eigenvalue of the k-th germ vector: J ℌ_zz f_k = i Ω_k f_k.
struct Frequencies {
  double omega_c = 0.0;
  double omega_a = 0.0;
  std::array<double, 3> Omega{};
  std::array<double, 3> Omega_nl{};

  /// ω_a for the two in-plane modes, Ω_3 for the axial one.
  double mode_scale(int k) const { return k < 2 ? omega_a : Omega[2]; }
};

Frequencies frequencies(const ParameterSet& R, const PhysicalConstants& constants);

struct FockIndex {
  std::array<unsigned, 3> n{0, 0, 0};

  unsigned total() const { return n[0] + n[1] + n[2]; }
  double weight(int k) const { return n[k] + 0.5; }
  friend bool operator==(const FockIndex&, const FockIndex&) = default;
};

/// Explicit skew-orthonormal germ (f_1, f_2, f_3) at R.
GermBasis germ_basis(const ParameterSet& R, const PhysicalConstants& constants);

/// Coordinate parts of the germ in frame coordinates: C̃_0 with C̃ = G C̃_0.
CMat3 coordinate_germ_frame(const ParameterSet& R, const PhysicalConstants& constants);

/// Q = B C⁻¹ = G diag(m(iω_a−ρ), m(iω_a−ρ), m(iΩ_3−ρ)) Gᵀ. Satisfies Q Z_k = W_k.
CMat3 quadratic_form_Q(const ParameterSet& R, const PhysicalConstants& constants);

/// Σ_k ⟨Δx_k²⟩ for the stationary Fock state ν.
double stationary_variance_trace(const ParameterSet& R, const FockIndex& nu,
                                 const PhysicalConstants& constants);

/// σ_xx = (ħ/4)[C̃ D_ν⁻¹ C̃⁺ + C̃* D_ν⁻¹ C̃ᵀ], assembled from the germ.
Mat3 stationary_sigma_xx(const ParameterSet& R, const FockIndex& nu, const PhysicalConstants& constants);

/// Full stationary second-moment matrix Δ_2 = (ħ/2) Re(A D_ν⁻¹ A⁺), A = (f_1 f_2 f_3).
Mat6 stationary_moments(const ParameterSet& R, const FockIndex& nu, const PhysicalConstants& constants);

/// E_ν = ħ Σ_k (Ω_k + Ω̃_k)(ν_k + 1/2).
double eigenvalue(const ParameterSet& R, const FockIndex& nu, const PhysicalConstants& constants);

/// det C(t) = −i/(m^{3/2} Ω_3^{1/2} ω_a) exp{i(Ω_1+Ω_2+Ω_3)t}.
cplx det_C(const ParameterSet& R, double t, const PhysicalConstants& constants);

/// Matrix generating the Hermite polynomials of the stationary states, −C̃_0⁺(C̃_0⁻¹)ᵀ.
CMat3 hermite_matrix(const ParameterSet& R, const PhysicalConstants& constants);

}  // namespace hberry
