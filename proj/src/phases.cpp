#include "hberry/phases.hpp"

#include <cmath>
#include <vector>

#include "hberry/dynamics.hpp"
#include "hberry/frame.hpp"

namespace hberry {

double BerryTerms::combine(const FockIndex& nu) const {
  const double dnu = static_cast<double>(nu.n[1]) - static_cast<double>(nu.n[0]);
  return (nu.weight(0) + nu.weight(1)) * plane + nu.weight(2) * axial + dnu * magnetic;
}

double distance_mod_2pi(double x) {
  const double r = std::remainder(x, kTwoPi);
  return std::abs(r);
}

double dynamic_phase(const ParameterLoop& loop, const FockIndex& nu, double T, const QuadratureOptions& opts) {
  if (!(T > 0.0)) throw Error(ErrorCode::InvalidArgument, "period T must be positive");
  const PhysicalConstants& constants = loop.constants();
  const double e = integrate([&](double s) { return eigenvalue(loop.sample(s).value, nu, constants); }, 0.0, 1.0,
                             opts);
  return -T / constants.hbar * e;
}

BerryTerms berry_terms(const ParameterLoop& loop, const QuadratureOptions& opts) {
  BerryTerms t;
  t.plane = integrate([&](double s) { return berry_density(loop, s).plane; }, 0.0, 1.0, opts);
  t.axial = integrate([&](double s) { return berry_density(loop, s).axial; }, 0.0, 1.0, opts);
  t.magnetic = integrate([&](double s) { return berry_density(loop, s).magnetic; }, 0.0, 1.0, opts);
  return t;
}

PhaseResult berry_phase(const ParameterLoop& loop, const FockIndex& nu, const ValidationOptions& validation,
                        const QuadratureOptions& opts) {
  validate_loop(loop, validation).raise_if_invalid();
  PhaseResult r;
  r.nu = nu;
  r.T = loop.period();
  r.dynamic = dynamic_phase(loop, nu, r.T, opts);
  r.dynamic_action = -r.dynamic * loop.constants().hbar;
  r.terms = berry_terms(loop, opts);
  r.berry = r.terms.combine(nu);
  return r;
}

double berry_phase_from_rates(const ParameterLoop& loop, const FockIndex& nu, const QuadratureOptions& opts) {
  return integrate([&](double s) { return berry_integrand_from_rates(loop, s, nu); }, 0.0, 1.0, opts);
}

double berry_phase_equal_ac(const ParameterLoop& loop, const FockIndex& nu, const QuadratureOptions& opts) {
  const Waveform& a = loop.waveforms().a;
  const Waveform& c = loop.waveforms().c;
  if (a.kind() != c.kind() || a.coefficients() != c.coefficients())
    throw Error(ErrorCode::InvalidConfig, "the a and c schedules must coincide");
  const PhysicalConstants& constants = loop.constants();
  const double q = constants.e_charge / (2.0 * constants.c_light);

  auto density = [&](double s) {
    const ParameterSample smp = loop.sample(s);
    const ParameterSet& R = smp.value;
    const ScalarRates sr = scalar_rates(smp, constants);
    const double m = R.m;
    const double nl2 = constants.kappa_tilde * R.a / m;
    const double Omega0_sq = R.k / m - R.rho * R.rho;
    if (!(Omega0_sq > 0.0)) throw Error(ErrorCode::ImaginaryFrequency, "k/m - rho^2 <= 0", s);
    const double L = q * R.H.norm() / m;
    const double omega0 = std::sqrt(L * L + Omega0_sq), Omega0 = std::sqrt(Omega0_sq);
    const double plane = (1.0 - nl2 / (omega0 * omega0)) * sr.m_rho / (2.0 * m * omega0);
    const double axial = (1.0 - nl2 / Omega0_sq) * sr.m_rho / (2.0 * m * Omega0);
    return (nu.weight(0) + nu.weight(1)) * plane + nu.weight(2) * axial;
  };
  const double dnu = static_cast<double>(nu.n[1]) - static_cast<double>(nu.n[0]);
  const double magnetic = integrate([&](double s) { return berry_density(loop, s).magnetic; }, 0.0, 1.0, opts);
  return integrate(density, 0.0, 1.0, opts) + dnu * magnetic;
}

double solid_angle(const ParameterLoop& loop, const QuadratureOptions& opts) {
  return integrate(
      [&](double s) {
        const ParameterSample smp = loop.sample(s);
        const MagneticFrame fr = magnetic_frame(smp.value.H);
        return (1.0 - std::cos(fr.theta)) * frame_rates(smp.value.H, smp.rate.H).phi_rate;
      },
      0.0, 1.0, opts);
}

int azimuth_winding(const ParameterLoop& loop, const QuadratureOptions& opts) {
  const double total = integrate([&](double s) { return frame_rates(loop, s).phi_rate; }, 0.0, 1.0, opts);
  return static_cast<int>(std::lround(total / kTwoPi));
}

HannayAngles hannay_angles(const ParameterLoop& loop, const ValidationOptions& validation,
                           const QuadratureOptions& opts) {
  validate_loop(loop, validation).raise_if_invalid();
  HannayAngles h;
  h.terms = berry_terms(loop, opts);
  h.theta = {-h.terms.plane + h.terms.magnetic, -h.terms.plane - h.terms.magnetic, -h.terms.axial};
  h.solid_angle = solid_angle(loop, opts);
  h.solid_angle_mismatch = distance_mod_2pi(h.theta[0] + h.solid_angle);
  return h;
}

PhaseExtraction extract_phase_numeric(const ParameterLoop& loop, int mode, double T, const Tolerances& tol,
                                      int samples, const QuadratureOptions& opts) {
  if (mode < 0 || mode > 2) throw Error(ErrorCode::InvalidArgument, "germ index must be 0, 1 or 2");
  if (!(T > 0.0)) throw Error(ErrorCode::InvalidArgument, "period T must be positive");
  if (samples < 2) throw Error(ErrorCode::InvalidArgument, "need at least two samples");
  const PhysicalConstants& constants = loop.constants();

  const GermBasis f0 = germ_basis(loop.sample(0.0).value, constants);
  CMat63 a0 = CMat63::Zero();
  a0.col(mode) = f0[mode].vector();

  std::vector<double> times(samples + 1);
  for (int i = 0; i <= samples; ++i) times[i] = T * static_cast<double>(i) / samples;
  times.back() = T;

  const GermTrajectory traj = propagate_germs(loop, T, a0, 0.0, T, tol, times);

  PhaseExtraction out;
  out.mode = mode;
  out.T = T;
  out.stats = traj.stats;

  auto omega_k = [&](double s) { return frequencies(loop.sample(s).value, constants).Omega[mode]; };
  double Phi = 0.0;  // ∫_0^s Ω_k
  double residual = 0.0;
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const GermSample& smp = traj.samples[i];
    const double s = smp.t / T;
    if (i > 0) Phi += integrate(omega_k, traj.samples[i - 1].t / T, s, opts);
    const GermVector fk = germ_basis(loop.sample(s).value, constants)[mode];
    const cplx c = skew_product(CVec6(smp.a.col(mode)), fk.conjugate().vector()) / cplx(0.0, 2.0);
    const double wrapped = std::arg(c) - T * Phi;
    residual = i == 0 ? wrapped : wrapped + kTwoPi * std::round((residual - wrapped) / kTwoPi);
    out.max_modulus_deviation = std::max(out.max_modulus_deviation, std::abs(std::abs(c) - 1.0));
    out.final_modulus = std::abs(c);
  }
  out.estimate = residual;
  out.adiabaticity_warning = out.max_modulus_deviation > 10.0 / T;
  out.closed_form = integrate([&](double s) { return geometric_rates(loop, s).phi_prime[mode]; }, 0.0, 1.0, opts);
  return out;
}

}  // namespace hberry
