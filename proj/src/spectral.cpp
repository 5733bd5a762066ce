#include "hberry/spectral.hpp"

#include <cmath>

namespace hberry {

double skew_orthonormality_defect(const CMat63& a) {
  double worst = 0.0;
  for (int k = 0; k < 3; ++k)
    for (int l = 0; l < 3; ++l) {
      const CVec6 ak = a.col(k), al = a.col(l);
      worst = std::max(worst, std::abs(skew_product(ak, al)));
      const cplx target = k == l ? cplx(0.0, 2.0) : cplx(0.0, 0.0);
      worst = std::max(worst, std::abs(skew_product(ak, CVec6(al.conjugate())) - target));
    }
  return worst;
}

Frequencies frequencies(const ParameterSet& R, const PhysicalConstants& constants) {
  if (!(R.m > 0.0)) throw Error(ErrorCode::InvalidArgument, "mass must be positive");
  const double k_tilde = effective_stiffness(R, constants).k_tilde;
  const double omega3_sq = k_tilde / R.m - R.rho * R.rho;
  if (!(omega3_sq > 0.0))
    throw Error(ErrorCode::ImaginaryFrequency, "k_tilde/m - rho^2 <= 0: instantaneous Hamiltonian is unstable");

  Frequencies f;
  const double larmor = constants.e_charge * R.H.norm() / (2.0 * R.m * constants.c_light);
  f.omega_c = 2.0 * larmor;
  f.omega_a = std::sqrt(larmor * larmor + omega3_sq);
  f.Omega = {f.omega_a + larmor, f.omega_a - larmor, std::sqrt(omega3_sq)};
  const double shift = constants.kappa_tilde * R.c / (2.0 * R.m);
  f.Omega_nl = {shift / f.omega_a, shift / f.omega_a, shift / f.Omega[2]};
  return f;
}

GermBasis germ_basis(const ParameterSet& R, const PhysicalConstants& constants) {
  const Frequencies f = frequencies(R, constants);
  const MagneticFrame fr = magnetic_frame(R.H);
  const double m = R.m, rho = R.rho, wa = f.omega_a, w3 = f.Omega[2];

  GermBasis basis;
  for (int eta = 1; eta <= 2; ++eta) {
    const double sgn = eta == 1 ? -1.0 : 1.0;  // (−1)^η
    const cplx wpref = std::sqrt(m) * cplx(wa, rho) / std::sqrt(2.0 * wa);
    const CVec3 ephi = fr.e_phi.cast<cplx>(), etheta = fr.e_theta.cast<cplx>();
    basis[eta - 1].W = wpref * (kI * ephi + sgn * etheta);
    basis[eta - 1].Z = (ephi - kI * sgn * etheta) / std::sqrt(2.0 * m * wa);
  }
  basis[2].W = -std::sqrt(m) * cplx(rho, -w3) / std::sqrt(w3) * fr.e_n.cast<cplx>();
  basis[2].Z = fr.e_n.cast<cplx>() / std::sqrt(m * w3);
  return basis;
}

CMat3 coordinate_germ_frame(const ParameterSet& R, const PhysicalConstants& constants) {
  const Frequencies f = frequencies(R, constants);
  const double a = 1.0 / std::sqrt(2.0 * R.m * f.omega_a);
  CMat3 c0 = CMat3::Zero();
  // columns: Z-parts of f_1, f_2, f_3 in (e_phi, e_theta, e_n) coordinates
  c0(0, 0) = a;
  c0(1, 0) = kI * a;
  c0(0, 1) = a;
  c0(1, 1) = -kI * a;
  c0(2, 2) = 1.0 / std::sqrt(R.m * f.Omega[2]);
  return c0;
}

CMat3 quadratic_form_Q(const ParameterSet& R, const PhysicalConstants& constants) {
  const Frequencies f = frequencies(R, constants);
  const Mat3 G = build_G(magnetic_frame(R.H)).G;
  CMat3 q0 = CMat3::Zero();
  q0(0, 0) = R.m * cplx(-R.rho, f.omega_a);
  q0(1, 1) = R.m * cplx(-R.rho, f.omega_a);
  q0(2, 2) = R.m * cplx(-R.rho, f.Omega[2]);
  const CMat3 Gc = G.cast<cplx>();
  return Gc * q0 * Gc.transpose();
}

double stationary_variance_trace(const ParameterSet& R, const FockIndex& nu,
                                 const PhysicalConstants& constants) {
  const Frequencies f = frequencies(R, constants);
  double tr = 0.0;
  for (int k = 0; k < 3; ++k) tr += nu.weight(k) * constants.hbar / (R.m * f.mode_scale(k));
  return tr;
}

Mat3 stationary_sigma_xx(const ParameterSet& R, const FockIndex& nu, const PhysicalConstants& constants) {
  const Mat3 G = build_G(magnetic_frame(R.H)).G;
  const CMat3 C = G.cast<cplx>() * coordinate_germ_frame(R, constants);
  CMat3 Dinv = CMat3::Zero();
  for (int k = 0; k < 3; ++k) Dinv(k, k) = 2.0 * nu.n[k] + 1.0;
  const CMat3 s = 0.25 * constants.hbar * (C * Dinv * C.adjoint() + C.conjugate() * Dinv * C.transpose());
  return s.real();
}

Mat6 stationary_moments(const ParameterSet& R, const FockIndex& nu, const PhysicalConstants& constants) {
  const CMat63 A = germ_matrix(germ_basis(R, constants));
  CMat3 Dinv = CMat3::Zero();
  for (int k = 0; k < 3; ++k) Dinv(k, k) = 2.0 * nu.n[k] + 1.0;
  const CMat6 full = A * Dinv * A.adjoint();
  Mat6 d = 0.5 * constants.hbar * full.real();
  return 0.5 * (d + d.transpose());
}

double eigenvalue(const ParameterSet& R, const FockIndex& nu, const PhysicalConstants& constants) {
  const Frequencies f = frequencies(R, constants);
  double e = 0.0;
  for (int k = 0; k < 3; ++k) e += (f.Omega[k] + f.Omega_nl[k]) * nu.weight(k);
  return constants.hbar * e;
}

cplx det_C(const ParameterSet& R, double t, const PhysicalConstants& constants) {
  const Frequencies f = frequencies(R, constants);
  const double mod = 1.0 / (std::pow(R.m, 1.5) * std::sqrt(f.Omega[2]) * f.omega_a);
  const double phase = (f.Omega[0] + f.Omega[1] + f.Omega[2]) * t;
  return -kI * mod * std::exp(kI * phase);
}

CMat3 hermite_matrix(const ParameterSet& R, const PhysicalConstants& constants) {
  const CMat3 c0 = coordinate_germ_frame(R, constants);
  return -c0.adjoint() * c0.inverse().transpose();
}

}  // namespace hberry
