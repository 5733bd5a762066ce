#include "doctest.h"

#include <random>

#include "hberry/dynamics.hpp"
#include "random_loops.hpp"

using namespace hberry;

namespace {

// Scalar quadratic Hamiltonian at the mean with stiffness `k_eff`.
double scalar_h(const Vec6& z, const ParameterSet& R, const PhysicalConstants& c, double k_eff) {
  const Vec3 p = z.head<3>(), x = z.tail<3>();
  const double e = c.e_charge, cl = c.c_light;
  const Vec3 A = 0.5 * R.H.cross(x);  // symmetric gauge
  const Vec3 kin = p - e / cl * A;
  return kin.squaredNorm() / (2 * R.m) + R.rho * x.dot(p) + 0.5 * k_eff * x.squaredNorm();
}

Vec6 random_vec6(std::mt19937_64& rng) {
  Vec6 z;
  for (int i = 0; i < 6; ++i) z(i) = testing::uniform(rng, -1, 1);
  return z;
}

}  // namespace

TEST_CASE("gradient at the origin vanishes; plain oscillator limit") {
  ParameterSet R;
  R.m = 2.0;
  R.k = 3.0;
  R.a = 0.2;
  R.b = 0.1;
  PhysicalConstants c;
  c.kappa_tilde = 0.5;
  MomentState g;
  CHECK(hamiltonian_gradient(g, R, c).norm() == 0.0);
  g.z << 1.0, -2.0, 0.5, 0.3, 0.7, -0.4;
  const Vec6 grad = hamiltonian_gradient(g, R, c);
  const double k1 = 3.0 + 0.5 * (0.2 + 0.1);
  for (int i = 0; i < 3; ++i) {
    CHECK(grad(i) == doctest::Approx(g.z(i) / 2.0).epsilon(1e-12));
    CHECK(grad(3 + i) == doctest::Approx(k1 * g.z(3 + i)).epsilon(1e-12));
  }
}

TEST_CASE("gradient equals the finite-difference gradient of the scalar Hamiltonian") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const ParameterSet R = testing::random_parameter_set(rng);
    PhysicalConstants c;
    c.kappa_tilde = testing::uniform(rng, -0.5, 0.5);
    c.e_charge = testing::uniform(rng, 0.5, 2.0);
    const double k1 = effective_stiffness(R, c).k_one;
    MomentState g;
    g.z = random_vec6(rng);
    const Vec6 grad = hamiltonian_gradient(g, R, c);
    const double h = 1e-6;
    for (int i = 0; i < 6; ++i) {
      Vec6 zp = g.z, zm = g.z;
      zp(i) += h;
      zm(i) -= h;
      const double fd = (scalar_h(zp, R, c, k1) - scalar_h(zm, R, c, k1)) / (2 * h);
      CHECK(grad(i) == doctest::Approx(fd).epsilon(1e-7).scale(1.0));
    }
  }
}

TEST_CASE("mean energy uses k_0 plus the variance term") {
  std::mt19937_64 rng(37);
  const ParameterSet R = testing::random_parameter_set(rng);
  PhysicalConstants c;
  c.kappa_tilde = 0.3;
  MomentState g;
  g.z = random_vec6(rng);
  g.Delta2 = stationary_moments(R, FockIndex{}, c);
  const double expect = scalar_h(g.z, R, c, effective_stiffness(R, c).k_zero) +
                        0.5 * c.kappa_tilde * R.c * g.Delta2.block<3, 3>(3, 3).trace();
  CHECK(mean_energy(g, R, c) == doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("Hessian structure") {
  SUBCASE("no field, no cross-coupling") {
    ParameterSet R;
    R.m = 2.0;
    R.k = 3.0;
    const Mat6 H = hessian(R, {});
    Mat6 expect = Mat6::Zero();
    expect.diagonal() << 0.5, 0.5, 0.5, 3.0, 3.0, 3.0;
    CHECK((H - expect).norm() < 1e-15);
  }
  SUBCASE("linear map of the gradient when k_1 = k_tilde") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 10; ++trial) {
      ParameterSet R = testing::random_parameter_set(rng);
      R.b = 0.0;
      PhysicalConstants c;
      c.kappa_tilde = testing::uniform(rng, -0.5, 0.5);
      const Mat6 H = hessian(R, c);
      CHECK((H - H.transpose()).cwiseAbs().maxCoeff() < 1e-14);
      for (int i = 0; i < 10; ++i) {
        MomentState g;
        g.z = random_vec6(rng);
        CHECK((H * g.z - hamiltonian_gradient(g, R, c)).norm() < 1e-13 * (1 + g.z.norm()));
      }
    }
  }
}

TEST_CASE("constant loop: germs rotate by exp(i Omega t)") {
  ParameterSet R;
  R.m = 1.2;
  R.k = 2.3;
  R.rho = 0.2;
  R.H = Vec3(0.5, -0.9, 0.4);
  const double T = 25.0;
  const ParameterLoop loop = testing::constant_loop(R, T);
  const GermBasis f = germ_basis(R, {});
  const GermTrajectory traj = integrate_variations(loop, T, f);
  const Frequencies w = frequencies(R, {});
  const CMat63 aT = traj.samples.back().a;
  CHECK(traj.samples.back().t == T);
  for (int k = 0; k < 3; ++k) {
    const CVec6 expect = std::exp(kI * w.Omega[k] * T) * f[k].vector();
    CHECK((aT.col(k) - expect).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("variations conserve skew products on random loops") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 3; ++trial) {
    const ParameterLoop loop = testing::random_loop(rng, 20.0);
    const GermBasis f = germ_basis(loop.sample(0.0).value, loop.constants());
    std::vector<double> times{5.0, 10.0, 20.0};
    const GermTrajectory traj = integrate_variations(loop, 20.0, f, {}, times);
    CHECK(traj.samples.size() == 3);
    CHECK(traj.max_skew_drift < 1e-8);
  }
}

TEST_CASE("zero initial data stays zero; linearity") {
  std::mt19937_64 rng(47);
  const ParameterLoop loop = testing::random_loop(rng, 10.0);
  const GermTrajectory z = propagate_germs(loop, 10.0, CMat63::Zero(), 0.0, 10.0, {});
  CHECK(z.samples.back().a.norm() == 0.0);

  CMat63 a = CMat63::Zero(), b = CMat63::Zero();
  for (int i = 0; i < 6; ++i) {
    a(i, 0) = cplx(testing::uniform(rng, -1, 1), testing::uniform(rng, -1, 1));
    b(i, 0) = cplx(testing::uniform(rng, -1, 1), testing::uniform(rng, -1, 1));
  }
  const cplx alpha(0.3, -1.1), beta(2.0, 0.4);
  CMat63 combo = alpha * a + beta * b;
  Tolerances tol;
  tol.rtol = 1e-12;
  tol.atol = 1e-14;
  const CMat63 ra = propagate_germs(loop, 10.0, a, 0.0, 10.0, tol).samples.back().a;
  const CMat63 rb = propagate_germs(loop, 10.0, b, 0.0, 10.0, tol).samples.back().a;
  const CMat63 rc = propagate_germs(loop, 10.0, combo, 0.0, 10.0, tol).samples.back().a;
  CHECK((rc - alpha * ra - beta * rb).norm() < 1e-8 * rc.norm());
}

TEST_CASE("time reversal returns the initial germ") {
  ParameterSet R;
  R.m = 1.0;
  R.k = 2.0;
  R.H = Vec3(1.0, 0.5, 0.3);
  const ParameterLoop loop = testing::constant_loop(R, 30.0);
  const CMat63 a0 = germ_matrix(germ_basis(R, {}));
  const CMat63 aT = propagate_germs(loop, 30.0, a0, 0.0, 30.0, {}).samples.back().a;
  const CMat63 back = propagate_germs(loop, 30.0, aT, 30.0, 0.0, {}).samples.back().a;
  CHECK((back - a0).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("non-skew-orthonormal initial germ is rejected") {
  ParameterSet R;
  R.m = 1.0;
  R.k = 2.0;
  R.H = Vec3(1.0, 0.0, 0.0);
  GermBasis f = germ_basis(R, {});
  f[0].Z *= 1.01;
  try {
    integrate_variations(testing::constant_loop(R), 10.0, f);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotSkewOrthonormal);
  }
}

TEST_CASE("stationary moments stay put on a constant loop") {
  ParameterSet R;
  R.m = 1.0;
  R.k = 2.0;
  R.rho = 0.1;
  R.H = Vec3(0.3, 1.0, 0.4);
  R.a = 0.2;
  R.c = 0.3;
  PhysicalConstants c;
  c.kappa_tilde = 0.2;
  const ParameterLoop loop = testing::constant_loop(R, 20.0, 0.2);
  MomentState g0;
  g0.Delta2 = stationary_moments(R, FockIndex{{1, 0, 1}}, c);
  const MomentTrajectory traj = integrate_moments(loop, 20.0, g0);
  const MomentState& gT = traj.samples.back().g;
  CHECK(gT.z.norm() == 0.0);
  CHECK((gT.Delta2 - g0.Delta2).cwiseAbs().maxCoeff() < 1e-8);
  CHECK_FALSE(traj.uncertainty_warning);
}

TEST_CASE("first moments reproduce the harmonic oscillator") {
  ParameterSet R;
  R.m = 2.0;
  R.k = 8.0;
  R.H = Vec3::Zero();
  const double T = 7.0, w = 2.0;
  MomentState g0;
  g0.z << 0.4, -0.2, 0.1, 1.0, 0.5, -0.3;
  g0.Delta2 = Mat6::Identity();
  const MomentTrajectory traj = integrate_moments(testing::constant_loop(R, T), T, g0);
  const Vec6 z = traj.samples.back().g.z;
  for (int i = 0; i < 3; ++i) {
    const double x = g0.z(3 + i) * std::cos(w * T) + g0.z(i) * std::sin(w * T) / (R.m * w);
    CHECK(z(3 + i) == doctest::Approx(x).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("moment ODE agrees with the fundamental-matrix propagation") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 3; ++trial) {
    const double T = 20.0;
    const ParameterLoop loop = testing::random_loop(rng, T, 0.1);
    MomentState g0;
    g0.Delta2 = stationary_moments(loop.sample(0.0).value, FockIndex{{0, 1, 0}}, loop.constants());
    const double t = 13.0;
    const std::vector<double> times{t};
    const MomentTrajectory traj = integrate_moments(loop, T, g0, {}, times);
    REQUIRE(traj.samples.size() == 1);
    const Mat6 A = fundamental_matrix(loop, T, t);
    const Mat6 expect = A * g0.Delta2 * A.transpose();
    CHECK((traj.samples[0].g.Delta2 - expect).cwiseAbs().maxCoeff() < 1e-7);
    CHECK(A.determinant() == doctest::Approx(1.0).epsilon(1e-8));
  }
}
