#include "hberry/adiabatic.hpp"

#include <algorithm>
#include <cmath>

namespace hberry {

ScalarRates scalar_rates(const ParameterSample& sample, const PhysicalConstants& constants) {
  const ParameterSet& R = sample.value;
  const ParameterSet& d = sample.rate;
  const Frequencies f = frequencies(R, constants);
  const double m = R.m, dm = d.m;

  const double kt = R.k + constants.kappa_tilde * R.a;
  const double dkt = d.k + constants.kappa_tilde * d.a;
  const double Hmag = R.H.norm();
  const double dHmag = Hmag > 0.0 ? R.H.dot(d.H) / Hmag : 0.0;
  const double q = constants.e_charge / (2.0 * constants.c_light);
  const double L = q * Hmag / m;
  const double dL = q * (dHmag / m - Hmag * dm / (m * m));

  const double d_omega3_sq = dkt / m - kt * dm / (m * m) - 2.0 * R.rho * d.rho;
  const double d_omega_a_sq = 2.0 * L * dL + d_omega3_sq;

  ScalarRates r;
  r.m_rho = dm * R.rho + m * d.rho;
  r.m_omega_a = dm * f.omega_a + m * d_omega_a_sq / (2.0 * f.omega_a);
  r.m_Omega3 = dm * f.Omega[2] + m * d_omega3_sq / (2.0 * f.Omega[2]);
  return r;
}

AdiabaticRates geometric_rates(const ParameterLoop& loop, double s) {
  const ParameterSample smp = loop.sample(s);
  const PhysicalConstants& constants = loop.constants();
  const Frequencies f = frequencies(smp.value, constants);
  const FrameRates fr = frame_rates(smp.value.H, smp.rate.H);
  const ScalarRates sr = scalar_rates(smp, constants);
  const double m = smp.value.m;

  AdiabaticRates out;
  const double plane = -sr.m_rho / (2.0 * m * f.omega_a);
  out.phi_prime = {plane + 0.5 * fr.twist(), plane - 0.5 * fr.twist(), -sr.m_rho / (2.0 * m * f.Omega[2])};
  out.Phi_prime = f.Omega;
  return out;
}

CouplingMatrices coupling_matrices(const ParameterLoop& loop, double s) {
  const ParameterSample smp = loop.sample(s);
  const PhysicalConstants& constants = loop.constants();
  const Frequencies f = frequencies(smp.value, constants);
  const FrameRates fr = frame_rates(smp.value.H, smp.rate.H);
  const ScalarRates sr = scalar_rates(smp, constants);
  const double m = smp.value.m, wa = f.omega_a, w3 = f.Omega[2];
  const auto& W = f.Omega;

  const double scale = *std::max_element(W.begin(), W.end());
  for (int k = 0; k < 2; ++k)
    if (std::abs(W[k] - W[2]) < 1e-8 * scale)
      throw Error(ErrorCode::Resonance, "Omega_" + std::to_string(k + 1) + " = Omega_3 in coupling denominators", s);

  CouplingMatrices c;
  c.gamma = std::sqrt(w3 / (2.0 * wa)) + std::sqrt(wa / (2.0 * w3));
  c.gamma_tilde = std::sqrt(w3 / (2.0 * wa)) - std::sqrt(wa / (2.0 * w3));

  // ⟨e_n', ±i e_φ ± e_θ⟩
  const cplx n_mp = -kI * fr.dn_phi + fr.dn_theta;  // (−i e_φ + e_θ)
  const cplx n_mm = -kI * fr.dn_phi - fr.dn_theta;  // (−i e_φ − e_θ)
  const cplx n_pp = kI * fr.dn_phi + fr.dn_theta;   // ( i e_φ + e_θ)
  const cplx n_pm = kI * fr.dn_phi - fr.dn_theta;   // ( i e_φ − e_θ)

  c.A_mat(0, 2) = c.gamma / (2.0 * (W[0] - W[2])) * n_mp;
  c.A_mat(1, 2) = c.gamma / (2.0 * (W[1] - W[2])) * n_mm;
  c.A_mat(2, 0) = c.gamma / (2.0 * (W[2] - W[0])) * n_pp;
  c.A_mat(2, 1) = c.gamma / (2.0 * (W[2] - W[1])) * n_pm;

  const cplx b12 = cplx(sr.m_rho, -sr.m_omega_a) / (4.0 * m * wa * wa);
  c.B_mat(0, 1) = c.B_mat(1, 0) = b12;
  c.B_mat(0, 2) = c.B_mat(2, 0) = c.gamma_tilde / (2.0 * (W[2] + W[0])) * n_mp;
  c.B_mat(1, 2) = c.B_mat(2, 1) = c.gamma_tilde / (2.0 * (W[2] + W[1])) * n_mm;
  c.B_mat(2, 2) = cplx(sr.m_rho, -sr.m_Omega3) / (4.0 * m * w3 * w3);
  return c;
}

VarianceTrace variance_correction_trace(const ParameterLoop& loop, double s, const FockIndex& nu) {
  const ParameterSample smp = loop.sample(s);
  const PhysicalConstants& constants = loop.constants();
  const Frequencies f = frequencies(smp.value, constants);
  const ScalarRates sr = scalar_rates(smp, constants);
  const double m = smp.value.m, hbar = constants.hbar;

  VarianceTrace t;
  for (int k = 0; k < 3; ++k) {
    const double w = f.mode_scale(k);
    t.trace0 += nu.weight(k) * hbar / (m * w);
    t.trace1 += nu.weight(k) * hbar * sr.m_rho / (2.0 * m * m * w * w * w);
  }
  return t;
}

Mat3 variance_correction_matrix(const ParameterLoop& loop, double s, const FockIndex& nu) {
  const ParameterSample smp = loop.sample(s);
  const PhysicalConstants& constants = loop.constants();
  const CouplingMatrices cm = coupling_matrices(loop, s);
  const Mat3 G = build_G(magnetic_frame(smp.value.H)).G;
  const CMat3 C0 = G.cast<cplx>() * coordinate_germ_frame(smp.value, constants);
  const CMat3 C1 = C0 * cm.A_mat.transpose() + C0.conjugate() * cm.B_mat.transpose();
  CMat3 D = CMat3::Zero();
  for (int k = 0; k < 3; ++k) D(k, k) = 2.0 * nu.n[k] + 1.0;
  const CMat3 s1 = 0.25 * constants.hbar *
                   (C0 * D * C1.adjoint() + C1 * D * C0.adjoint() + C0.conjugate() * D * C1.transpose() +
                    C1.conjugate() * D * C0.transpose());
  const Mat3 r = s1.real();
  return 0.5 * (r + r.transpose());
}

BerryDensity berry_density(const ParameterLoop& loop, double s) {
  const ParameterSample smp = loop.sample(s);
  const PhysicalConstants& constants = loop.constants();
  const ParameterSet& R = smp.value;
  const Frequencies f = frequencies(R, constants);
  magnetic_frame(R.H);  // axis and zero-field checks
  const ScalarRates sr = scalar_rates(smp, constants);
  const double m = R.m, kc = constants.kappa_tilde * R.c;
  const double wa = f.omega_a, w3 = f.Omega[2];

  BerryDensity d;
  d.plane = (1.0 - kc / (2.0 * m * wa * wa)) * sr.m_rho / (2.0 * m * wa);
  d.axial = (1.0 - kc / (2.0 * m * w3 * w3)) * sr.m_rho / (2.0 * m * w3);
  const Vec3& H = R.H;
  const Vec3& dH = smp.rate.H;
  const double perp2 = H.x() * H.x() + H.y() * H.y();
  d.magnetic = H.z() * (H.x() * dH.y() - H.y() * dH.x()) / (H.norm() * perp2);
  return d;
}

double berry_integrand_from_rates(const ParameterLoop& loop, double s, const FockIndex& nu) {
  const AdiabaticRates r = geometric_rates(loop, s);
  const VarianceTrace vt = variance_correction_trace(loop, s, nu);
  const PhysicalConstants& constants = loop.constants();
  const double c = loop.sample(s).value.c;
  double v = 0.0;
  for (int j = 0; j < 3; ++j) v -= r.phi_prime[j] * nu.weight(j);
  v -= constants.kappa_tilde * c / (2.0 * constants.hbar) * vt.trace1;
  return v;
}

AsymptoticPhase asymptotic_phase(const ParameterLoop& loop, const FockIndex& nu, double T, double s_begin,
                                 double s_end, const QuadratureOptions& opts) {
  if (!(T > 0.0)) throw Error(ErrorCode::InvalidArgument, "period T must be positive");
  const PhysicalConstants& constants = loop.constants();
  AsymptoticPhase p;
  if (s_begin == s_end) return p;
  const double energy = integrate(
      [&](double s) { return eigenvalue(loop.sample(s).value, nu, constants); }, s_begin, s_end, opts);
  p.dynamic = -T / constants.hbar * energy;
  const double w12 = nu.weight(0) + nu.weight(1), w3 = nu.weight(2);
  const double dnu = static_cast<double>(nu.n[1]) - static_cast<double>(nu.n[0]);
  p.geometric = integrate(
      [&](double s) {
        const BerryDensity d = berry_density(loop, s);
        return w12 * d.plane + w3 * d.axial + dnu * d.magnetic;
      },
      s_begin, s_end, opts);
  return p;
}

}  // namespace hberry
