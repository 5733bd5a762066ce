#include "doctest.h"

#include <random>

#include "hberry/phases.hpp"
#include "random_loops.hpp"

using namespace hberry;

TEST_CASE("dynamic phase") {
  ParameterSet R;
  R.m = 1.0;
  R.k = 2.0;
  R.H = Vec3(0.7, 0.2, -0.4);
  const FockIndex nu{{0, 2, 1}};
  SUBCASE("constant loop") {
    CHECK(dynamic_phase(testing::constant_loop(R), nu, 30.0) ==
          doctest::Approx(-30.0 * eigenvalue(R, nu, {})).epsilon(1e-13));
  }
  SUBCASE("linear in T") {
    std::mt19937_64 rng(79);
    const ParameterLoop loop = testing::random_loop(rng);
    const double d1 = dynamic_phase(loop, nu, 40.0), d2 = dynamic_phase(loop, nu, 80.0);
    CHECK(d2 == doctest::Approx(2 * d1).epsilon(1e-13));
    CHECK(d1 / 40.0 == doctest::Approx(d2 / 80.0).epsilon(1e-13));
  }
  SUBCASE("adaptive quadrature vs trapezoid") {
    LoopWaveforms w;
    w.m = Waveform::constant(1.0);
    w.k = Waveform::sinusoid(2.0, 0.5, 1, 0.3);
    w.H1 = Waveform::constant(0.7);
    w.H3 = Waveform::constant(0.2);
    const ParameterLoop loop(w, {}, 10.0);
    const int N = 4096;
    double trap = 0.0;
    for (int i = 0; i < N; ++i) trap += eigenvalue(loop.sample(double(i) / N).value, nu, {});
    trap *= -10.0 / N;
    CHECK(dynamic_phase(loop, nu, 10.0) == doctest::Approx(trap).epsilon(1e-8));
  }
}

TEST_CASE("constant-latitude Berry phase") {
  const double th0 = kPi / 3;
  const ParameterLoop loop = testing::latitude_loop(th0);
  const PhaseResult r = berry_phase(loop, FockIndex{{0, 1, 0}});
  CHECK(std::abs(r.terms.plane) < 1e-12);
  CHECK(std::abs(r.terms.axial) < 1e-12);
  CHECK(r.terms.magnetic == doctest::Approx(kPi).epsilon(1e-10));
  CHECK(r.berry == doctest::Approx(kPi).epsilon(1e-10));
  CHECK(berry_phase(loop, FockIndex{{2, 0, 5}}).berry == doctest::Approx(-2 * kPi).epsilon(1e-10));
  CHECK(r.dynamic_action == doctest::Approx(-r.dynamic).epsilon(1e-12));
}

TEST_CASE("frozen loop has zero Berry phase") {
  ParameterSet R;
  R.m = 1.0;
  R.k = 2.0;
  R.rho = 0.1;
  R.H = Vec3(0.7, 0.2, -0.4);
  const PhaseResult r = berry_phase(testing::constant_loop(R), FockIndex{{1, 1, 1}});
  CHECK(r.berry == 0.0);
}

TEST_CASE("Berry phase is affine in nu and its terms reconstruct it") {
  std::mt19937_64 rng(83);
  const ParameterLoop loop = testing::random_loop(rng, 100.0, 0.2);
  const BerryTerms t = berry_terms(loop);
  for (unsigned a = 0; a < 3; ++a)
    for (unsigned b = 0; b < 3; ++b)
      for (unsigned c = 0; c < 2; ++c) {
        const FockIndex nu{{a, b, c}};
        const double g = t.combine(nu);
        const double expect = (a + b + 1.0) * t.plane + (c + 0.5) * t.axial + (double(b) - double(a)) * t.magnetic;
        CHECK(g == doctest::Approx(expect).epsilon(1e-14));
        CHECK(berry_phase_from_rates(loop, nu) == doctest::Approx(g).epsilon(1e-10).scale(1.0));
      }
}

TEST_CASE("Berry phase is invariant under reparameterization") {
  std::mt19937_64 rng(89);
  for (int trial = 0; trial < 3; ++trial) {
    const ParameterLoop loop = testing::random_loop(rng, 100.0, 0.1);
    const ParameterLoop warped = loop.reparameterized(0.5, trial + 1);
    const FockIndex nu{{1, 0, 2}};
    CHECK(berry_terms(warped).combine(nu) == doctest::Approx(berry_terms(loop).combine(nu)).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("Berry phase tends to the linear-theory value") {
  std::mt19937_64 rng(97);
  const ParameterLoop lin = testing::random_loop(rng, 100.0, 0.0);
  const FockIndex nu{{1, 2, 0}};
  // linear theory: same contours with the κ̃c terms absent and k in place of k̃
  auto linear_density = [&](double s) {
    const ParameterSample smp = lin.sample(s);
    const ParameterSet& R = smp.value;
    const double mrho = smp.rate.m * R.rho + R.m * smp.rate.rho;
    const double L = R.H.norm() / (2 * R.m);
    const double O3 = std::sqrt(R.k / R.m - R.rho * R.rho), wa = std::sqrt(L * L + O3 * O3);
    const Vec3& H = R.H;
    const Vec3& dH = smp.rate.H;
    const double mag = H.z() * (H.x() * dH.y() - H.y() * dH.x()) / (H.norm() * (H.x() * H.x() + H.y() * H.y()));
    return (nu.weight(0) + nu.weight(1)) * mrho / (2 * R.m * wa) + nu.weight(2) * mrho / (2 * R.m * O3) +
           (double(nu.n[1]) - double(nu.n[0])) * mag;
  };
  const double linear = integrate(linear_density, 0.0, 1.0);
  CHECK(berry_terms(lin).combine(nu) == doctest::Approx(linear).epsilon(1e-10).scale(1.0));
  double prev = 1e9;
  for (double kap : {1e-2, 1e-4, 1e-6}) {
    PhysicalConstants c;
    c.kappa_tilde = kap;
    const double d = std::abs(berry_terms(lin.with_constants(c)).combine(nu) - linear);
    CHECK(d < prev);
    prev = d;
  }
  CHECK(prev < 1e-6);
}

TEST_CASE("equal a and c: small-nonlinearity form") {
  LoopWaveforms w;
  w.m = Waveform::sinusoid(1.0, 0.1);
  w.k = Waveform::fourier({2.0, 0.2, 0.1});
  w.rho = Waveform::sinusoid(0.1, 0.08, 1, 0.5);
  w.H1 = Waveform::fourier({0.1, 1.0, 0.0});
  w.H2 = Waveform::fourier({0.0, 0.0, 1.0});
  w.H3 = Waveform::constant(0.5);
  w.a = Waveform::fourier({0.5, 0.1, 0.0});
  w.c = w.a;
  const FockIndex nu{{1, 0, 1}};
  std::vector<double> diffs;
  for (double kap : {1e-2, 1e-3, 1e-4}) {
    PhysicalConstants c;
    c.kappa_tilde = kap;
    const ParameterLoop loop(w, c, 100.0);
    diffs.push_back(std::abs(berry_phase_equal_ac(loop, nu) - berry_terms(loop).combine(nu)));
  }
  CHECK(diffs[2] < 1e-9);
  // second-order remainder: a decade in κ̃ buys two decades
  CHECK(diffs[0] / diffs[1] == doctest::Approx(100.0).epsilon(0.05));

  LoopWaveforms bad = w;
  bad.c = Waveform::constant(0.5);
  CHECK_THROWS_AS(berry_phase_equal_ac(ParameterLoop(bad, {}, 10.0), nu), Error);
}

TEST_CASE("Hannay angles and the solid angle") {
  const double th0 = kPi / 3;
  const ParameterLoop loop = testing::latitude_loop(th0);
  const HannayAngles h = hannay_angles(loop);
  CHECK(h.theta[0] == doctest::Approx(2 * kPi * std::cos(th0)).epsilon(1e-10));
  CHECK(h.theta[1] == doctest::Approx(-2 * kPi * std::cos(th0)).epsilon(1e-10));
  CHECK(std::abs(h.theta[2]) < 1e-12);
  CHECK(h.solid_angle == doctest::Approx(2 * kPi * (1 - std::cos(th0))).epsilon(1e-10));
  CHECK(h.solid_angle_mismatch < 1e-9);

  std::mt19937_64 rng(101);
  const ParameterLoop generic = testing::random_loop(rng);
  const HannayAngles g = hannay_angles(generic);
  CHECK(g.theta[0] + g.theta[1] == doctest::Approx(-2 * g.terms.plane).epsilon(1e-14));
  const BerryTerms t = g.terms;
  // Θ_i = −∂γ/∂ν_i by finite differences in the affine combination
  const FockIndex base{{1, 1, 1}};
  for (int i = 0; i < 3; ++i) {
    FockIndex up = base;
    ++up.n[i];
    CHECK(g.theta[i] == doctest::Approx(-(t.combine(up) - t.combine(base))).epsilon(1e-12).scale(1.0));
  }

  ParameterSet R;
  R.m = 1.0;
  R.k = 2.0;
  R.H = Vec3(1.0, 0.3, 0.2);
  const HannayAngles z = hannay_angles(testing::constant_loop(R));
  for (double v : z.theta) CHECK(v == 0.0);
}

TEST_CASE("solid angle") {
  CHECK(solid_angle(testing::latitude_loop(kPi / 2)) == doctest::Approx(kTwoPi).epsilon(1e-12));
  CHECK(solid_angle(testing::latitude_loop(0.7)) == doctest::Approx(kTwoPi * (1 - std::cos(0.7))).epsilon(1e-11));
  ParameterSet R;
  R.m = 1.0;
  R.k = 2.0;
  R.H = Vec3(1.0, 0.3, 0.2);
  CHECK(solid_angle(testing::constant_loop(R)) == 0.0);

  // reversed orientation: φ = −2πs
  LoopWaveforms w = testing::latitude_loop(0.7).waveforms();
  w.H2 = Waveform::fourier({0.0, 0.0, -2.0 * std::sin(0.7)});
  const ParameterLoop rev(w, {}, 100.0);
  CHECK(solid_angle(rev) == doctest::Approx(-kTwoPi * (1 - std::cos(0.7))).epsilon(1e-11));
  CHECK(azimuth_winding(rev) == -1);
  CHECK(azimuth_winding(testing::latitude_loop(0.7)) == 1);
}

TEST_CASE("magnetic term scales with the winding number") {
  LoopWaveforms w = testing::latitude_loop(1.1).waveforms();
  w.H1 = Waveform::fourier({0.0, 0.0, 0.0, 2.0 * std::sin(1.1), 0.0});
  w.H2 = Waveform::fourier({0.0, 0.0, 0.0, 0.0, 2.0 * std::sin(1.1)});
  const ParameterLoop twice(w, {}, 100.0);
  CHECK(azimuth_winding(twice) == 2);
  CHECK(berry_terms(twice).magnetic == doctest::Approx(2 * kTwoPi * std::cos(1.1)).epsilon(1e-10));
}

TEST_CASE("numeric phase extraction") {
  SUBCASE("constant loop gives zero") {
    ParameterSet R;
    R.m = 1.0;
    R.k = 2.0;
    R.H = Vec3(1.0, 0.4, 0.6);
    for (int k = 0; k < 3; ++k) {
      const PhaseExtraction e = extract_phase_numeric(testing::constant_loop(R), k, 40.0, {}, 256);
      CHECK(distance_mod_2pi(e.estimate) < 1e-8);
      CHECK(e.closed_form == 0.0);
      CHECK(e.max_modulus_deviation < 1e-8);
    }
  }
  SUBCASE("constant-latitude loop converges at first order") {
    const ParameterLoop loop = testing::latitude_loop(kPi / 3);
    const PhaseExtraction e1 = extract_phase_numeric(loop, 0, 50.0, {}, 512);
    const PhaseExtraction e2 = extract_phase_numeric(loop, 0, 100.0, {}, 512);
    CHECK(e1.closed_form == doctest::Approx(kPi).epsilon(1e-10));
    const double r = std::abs(e1.estimate - e1.closed_form) / std::abs(e2.estimate - e2.closed_form);
    CHECK(r == doctest::Approx(2.0).epsilon(0.15));
    CHECK_FALSE(e2.adiabaticity_warning);
  }
}

TEST_CASE("Berry phase validates the loop") {
  LoopWaveforms w;
  w.m = Waveform::constant(1.0);
  w.k = Waveform::constant(2.0);
  w.H1 = Waveform::fourier({0.0, 1.0, 0.0});
  w.H3 = Waveform::constant(0.5);
  try {
    berry_phase(ParameterLoop(w, {}, 10.0), FockIndex{});
    FAIL("expected axis error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AxisSingularity);
    CHECK(e.where().has_value());
  }
}

TEST_CASE("distance mod 2 pi") {
  CHECK(distance_mod_2pi(kTwoPi * 3 + 0.1) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(distance_mod_2pi(-kPi) == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(distance_mod_2pi(kPi - (-kPi)) == doctest::Approx(0.0).scale(1.0));
}
