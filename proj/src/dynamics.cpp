#include "hberry/dynamics.hpp"

#include <cmath>

namespace hberry {

namespace {

Mat3 cross_matrix(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return m;
}

std::vector<double> default_times(double t0, double t1, std::span<const double> times) {
  if (!times.empty()) return {times.begin(), times.end()};
  return {t0, t1};
}

}  // namespace

Vec6 hamiltonian_gradient(const MomentState& g, const ParameterSet& R, const PhysicalConstants& constants) {
  const Vec3 p = g.z.head<3>(), x = g.z.tail<3>();
  const double k1 = effective_stiffness(R, constants).k_one;
  const double em = constants.e_charge / (2.0 * R.m * constants.c_light);
  const double em2 = constants.e_charge * constants.e_charge / (4.0 * R.m * constants.c_light * constants.c_light);
  Vec6 out;
  out.head<3>() = p / R.m + R.rho * x - em * R.H.cross(x);
  out.tail<3>() = k1 * x + R.rho * p + em * R.H.cross(p) + em2 * R.H.cross(x.cross(R.H));
  return out;
}

double mean_energy(const MomentState& g, const ParameterSet& R, const PhysicalConstants& constants) {
  const Vec3 p = g.z.head<3>(), x = g.z.tail<3>();
  const double k0 = effective_stiffness(R, constants).k_zero;
  const double e = constants.e_charge, c = constants.c_light;
  const double hx = R.H.dot(x);
  return p.squaredNorm() / (2.0 * R.m) + R.rho * x.dot(p) + 0.5 * k0 * x.squaredNorm() -
         e / (2.0 * R.m * c) * R.H.cross(x).dot(p) +
         e * e / (8.0 * R.m * c * c) * (R.H.squaredNorm() * x.squaredNorm() - hx * hx) +
         0.5 * constants.kappa_tilde * R.c * g.Delta2.block<3, 3>(3, 3).trace();
}

Mat6 hessian(const ParameterSet& R, const PhysicalConstants& constants) {
  const double kt = effective_stiffness(R, constants).k_tilde;
  const double e = constants.e_charge, c = constants.c_light;
  Mat6 h;
  const Mat3 I = Mat3::Identity();
  const Mat3 hpx = R.rho * I - e / (2.0 * R.m * c) * cross_matrix(R.H);
  h.block<3, 3>(0, 0) = I / R.m;
  h.block<3, 3>(0, 3) = hpx;
  h.block<3, 3>(3, 0) = hpx.transpose();
  h.block<3, 3>(3, 3) = kt * I + e * e / (4.0 * R.m * c * c) * (R.H.squaredNorm() * I - R.H * R.H.transpose());
  return h;
}

GermTrajectory propagate_germs(const ParameterLoop& loop, double T, const CMat63& a0, double t0, double t1,
                               const Tolerances& tol, std::span<const double> times) {
  if (!(T > 0.0)) throw Error(ErrorCode::InvalidArgument, "period T must be positive");
  const Mat6 J = symplectic_unit();
  const PhysicalConstants& constants = loop.constants();
  auto rhs = [&](double t, const CMat63& a) -> CMat63 {
    const Mat6 JH = J * hessian(loop.sample(t / T).value, constants);
    return JH.cast<cplx>() * a;
  };

  const std::vector<double> ts = default_times(t0, t1, times);
  GermTrajectory traj;
  traj.samples.reserve(ts.size());
  CMat63 a = a0;
  traj.stats = integrate_rk(
      rhs, t0, t1, a, tol, std::span<const double>(ts),
      [&](std::size_t, double t, const CMat63& y) {
        const double defect = skew_orthonormality_defect(y);
        traj.samples.push_back({t, y, defect});
      },
      [](CMat63&) {});
  return traj;
}

GermTrajectory integrate_variations(const ParameterLoop& loop, double T, const GermBasis& a0,
                                    const Tolerances& tol, std::span<const double> times) {
  const CMat63 a = germ_matrix(a0);
  const double defect0 = skew_orthonormality_defect(a);
  if (defect0 > 1e-8)
    throw Error(ErrorCode::NotSkewOrthonormal,
                "initial germ is not skew-orthonormal (defect " + std::to_string(defect0) + ")");
  GermTrajectory traj = propagate_germs(loop, T, a, 0.0, T, tol, times);
  for (const auto& s : traj.samples) traj.max_skew_drift = std::max(traj.max_skew_drift, s.skew_defect);
  return traj;
}

Mat6 fundamental_matrix(const ParameterLoop& loop, double T, double t, const Tolerances& tol) {
  if (!(T > 0.0)) throw Error(ErrorCode::InvalidArgument, "period T must be positive");
  const Mat6 J = symplectic_unit();
  const PhysicalConstants& constants = loop.constants();
  Mat6 A = Mat6::Identity();
  integrate_rk([&](double tt, const Mat6& y) -> Mat6 {
    return J * hessian(loop.sample(tt / T).value, constants) * y;
  }, 0.0, t, A, tol);
  return A;
}

MomentTrajectory integrate_moments(const ParameterLoop& loop, double T, const MomentState& g0,
                                   const Tolerances& tol, std::span<const double> times) {
  if (!(T > 0.0)) throw Error(ErrorCode::InvalidArgument, "period T must be positive");
  using State = Eigen::Matrix<double, 6, 7>;
  const Mat6 J = symplectic_unit();
  const PhysicalConstants& constants = loop.constants();
  const double floor_det = std::pow(0.5 * constants.hbar, 6);

  auto rhs = [&](double t, const State& y) -> State {
    const ParameterSet R = loop.sample(t / T).value;
    const Mat6 H = hessian(R, constants);
    MomentState g;
    g.z = y.col(0);
    State out;
    out.col(0) = J * hamiltonian_gradient(g, R, constants);
    const Mat6 D = y.block<6, 6>(0, 1);
    out.block<6, 6>(0, 1) = J * H * D - D * H * J;
    return out;
  };

  State y;
  y.col(0) = g0.z;
  y.block<6, 6>(0, 1) = 0.5 * (g0.Delta2 + g0.Delta2.transpose());

  const std::vector<double> ts = default_times(0.0, T, times);
  MomentTrajectory traj;
  traj.samples.reserve(ts.size());
  traj.stats = integrate_rk(
      rhs, 0.0, T, y, tol, std::span<const double>(ts),
      [&](std::size_t, double t, const State& s) {
        MomentSample m;
        m.t = t;
        m.g.z = s.col(0);
        m.g.Delta2 = s.block<6, 6>(0, 1);
        m.uncertainty_ratio = m.g.Delta2.determinant() / floor_det;
        if (m.uncertainty_ratio < 1.0 - 1e-6) traj.uncertainty_warning = true;
        traj.samples.push_back(m);
      },
      [](State& s) {
        const Mat6 D = s.block<6, 6>(0, 1);
        s.block<6, 6>(0, 1) = 0.5 * (D + D.transpose());
      });
  return traj;
}

}  // namespace hberry
