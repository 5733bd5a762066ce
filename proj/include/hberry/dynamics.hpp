#pragma once

#include <span>
#include <vector>

#include "hberry/germ.hpp"
#include "hberry/integrator.hpp"
#include "hberry/parameters.hpp"
#include "hberry/spectral.hpp"

namespace hberry {

/// First moments z = (p, x) and symmetric second centered moments Δ_2.
struct MomentState {
  Vec6 z = Vec6::Zero();
  Mat6 Delta2 = Mat6::Zero();
};

/// ℌ_z: gradient blocks of the mean-field Hamiltonian, with the mean force stiffness k_1.
///   p-block: p/m + ρx − (e/2mc) H×x
///   x-block: k_1 x + ρp + (e/2mc) H×p + (e²/4mc²) H×(x×H)
Vec6 hamiltonian_gradient(const MomentState& g, const ParameterSet& R, const PhysicalConstants& constants);

/// Mean energy ℌ(g, R): quadratic part evaluated at the mean (with k_0) plus (κ̃c/2) tr σ_xx.
double mean_energy(const MomentState& g, const ParameterSet& R, const PhysicalConstants& constants);

/// ℌ_zz: Hessian of the fluctuation Hamiltonian (k̃ in the x-block).
///   ℌ_pp = I/m,  ℌ_px = ρI − (e/2mc)[H]_×,  ℌ_xx = k̃ I + (e²/4mc²)(|H|² I − H Hᵀ)
Mat6 hessian(const ParameterSet& R, const PhysicalConstants& constants);

struct GermSample {
  double t = 0.0;
  CMat63 a;
  double skew_defect = 0.0;  // skew_orthonormality_defect(a)
};

struct GermTrajectory {
  std::vector<GermSample> samples;
  IntegratorStats stats;
  double max_skew_drift = 0.0;
};

/// Solutions of ȧ = J ℌ_zz(R(t/T)) a from t0 to t1 for the three columns of a0, sampled at
/// `times` (monotone, within [t0, t1]; empty → endpoints). No normalization requirement on a0.
GermTrajectory propagate_germs(const ParameterLoop& loop, double T, const CMat63& a0, double t0, double t1,
                               const Tolerances& tol, std::span<const double> times = {});

/// Same over t ∈ [0, T], requiring a0 skew-orthonormal within 1e-8.
GermTrajectory integrate_variations(const ParameterLoop& loop, double T, const GermBasis& a0,
                                    const Tolerances& tol = {}, std::span<const double> times = {});

/// Real fundamental matrix A(t) of the system in variations, A(0) = I.
Mat6 fundamental_matrix(const ParameterLoop& loop, double T, double t, const Tolerances& tol = {});

struct MomentSample {
  double t = 0.0;
  MomentState g;
  double uncertainty_ratio = 1.0;  // det(Δ_2) / (ħ/2)^6
};

struct MomentTrajectory {
  std::vector<MomentSample> samples;
  IntegratorStats stats;
  bool uncertainty_warning = false;  // some sample had det(Δ_2) < (ħ/2)^6 beyond round-off
};

/// Hamilton–Ehrenfest system: ż = J ℌ_z(g, R), Δ̇_2 = J ℌ_zz Δ_2 − Δ_2 ℌ_zz J,
/// with Δ_2 symmetrized after each step.
MomentTrajectory integrate_moments(const ParameterLoop& loop, double T, const MomentState& g0,
                                   const Tolerances& tol = {}, std::span<const double> times = {});

}  // namespace hberry
