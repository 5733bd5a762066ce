#include "doctest.h"

#include <random>

#include "hberry/wavefield.hpp"
#include "random_loops.hpp"

using namespace hberry;

namespace {

ParameterSet wave_params() {
  ParameterSet R;
  R.m = 1.0;
  R.k = 1.5;
  R.rho = 0.1;
  R.H = Vec3(0.6, 0.3, 0.8);
  return R;
}

std::vector<FockIndex> indices_up_to(unsigned n) {
  std::vector<FockIndex> out;
  for (unsigned a = 0; a <= n; ++a)
    for (unsigned b = 0; a + b <= n; ++b)
      for (unsigned c = 0; a + b + c <= n; ++c) out.push_back(FockIndex{{a, b, c}});
  return out;
}

// Physicists' Hermite polynomial coefficients by H_{n+1} = 2x H_n − 2n H_{n−1}.
std::vector<double> hermite_1d(unsigned n) {
  std::vector<double> prev{1.0}, cur{0.0, 2.0};
  if (n == 0) return prev;
  for (unsigned k = 1; k < n; ++k) {
    std::vector<double> next(k + 2, 0.0);
    for (unsigned j = 0; j < cur.size(); ++j) next[j + 1] += 2.0 * cur[j];
    for (unsigned j = 0; j < prev.size(); ++j) next[j] -= 2.0 * k * prev[j];
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace

TEST_CASE("Hermite polynomial basics") {
  const CMat3 W = CMat3::Identity();
  const MultiIndexPolynomial p0 = hermite_poly(W, FockIndex{});
  CHECK(p0.terms().size() == 1);
  CHECK(p0.coefficient({0, 0, 0}) == cplx(1.0));

  CMat3 P = CMat3::Zero();
  P(0, 1) = P(1, 0) = P(2, 2) = 1.0;
  const MultiIndexPolynomial p1 = hermite_poly(P, FockIndex{{1, 0, 0}});
  CHECK(p1.terms().size() == 1);
  CHECK(p1.coefficient({0, 1, 0}) == cplx(2.0));
}

TEST_CASE("identity W reproduces the 1D recurrence") {
  for (unsigned n = 0; n <= 6; ++n) {
    const MultiIndexPolynomial p = hermite_poly(CMat3::Identity(), FockIndex{{n, 0, 0}});
    const std::vector<double> ref = hermite_1d(n);
    CHECK(p.degree() == n);
    for (unsigned j = 0; j <= n; ++j) CHECK(p.coefficient({j, 0, 0}) == cplx(ref[j]));
    for (const auto& [e, c] : p.terms()) CHECK(e[1] + e[2] == 0);
  }
}

TEST_CASE("integer W gives integer coefficients and mixed operators commute") {
  CMat3 W;
  W << 1.0, 2.0, 0.0, 2.0, -1.0, 3.0, 0.0, 3.0, 2.0;
  const MultiIndexPolynomial p = hermite_poly(W, FockIndex{{2, 1, 2}});
  CHECK(p.degree() == 5);
  for (const auto& [e, c] : p.terms()) {
    CHECK(c.imag() == 0.0);
    CHECK(c.real() == std::round(c.real()));
  }
}

TEST_CASE("Hermite generating matrix evaluates to minus the coordinate swap") {
  std::mt19937_64 rng(103);
  for (int i = 0; i < 10; ++i) {
    const CMat3 W = hermite_matrix(testing::random_parameter_set(rng), {});
    CMat3 P = CMat3::Zero();
    P(0, 1) = P(1, 0) = P(2, 2) = 1.0;
    CHECK((W + P).norm() < 1e-13);
  }
}

TEST_CASE("vacuum density of the isotropic oscillator") {
  ParameterSet R;
  R.m = 1.0;
  R.k = 1.0;
  R.H = Vec3(1e-9, 2e-9, 0.0);  // ω_a = Ω_3 = 1 up to 1e-18
  std::mt19937_64 rng(107);
  for (int i = 0; i < 20; ++i) {
    const Vec3 x(testing::uniform(rng, -2, 2), testing::uniform(rng, -2, 2), testing::uniform(rng, -2, 2));
    const double dens = std::norm(fock_state_at(R, FockIndex{}, x, {}));
    CHECK(dens == doctest::Approx(std::pow(kPi, -1.5) * std::exp(-x.squaredNorm())).epsilon(1e-12));
  }
}

TEST_CASE("Fock states solve the stationary linear problem") {
  // −ħ²∇²/2m + (iħe/mc) A·∇ + e²A²/2mc² − iħρ(x·∇ + 3/2) + k̃x²/2, A = H×x/2
  std::mt19937_64 rng(109);
  const double h = 1e-3;
  for (int trial = 0; trial < 4; ++trial) {
    const ParameterSet R = testing::random_parameter_set(rng);
    PhysicalConstants c;
    c.hbar = 0.7;
    const double kt = effective_stiffness(R, c).k_tilde;
    for (const FockIndex& nu : indices_up_to(2)) {
      const FockState psi(R, nu, c);
      double E = 0.0;
      const Frequencies f = frequencies(R, c);
      for (int k = 0; k < 3; ++k) E += c.hbar * f.Omega[k] * nu.weight(k);
      for (int p = 0; p < 3; ++p) {
        const Vec3 x(testing::uniform(rng, -0.8, 0.8), testing::uniform(rng, -0.8, 0.8),
                     testing::uniform(rng, -0.8, 0.8));
        const cplx v = psi(x);
        CVec3 grad;
        cplx lap = 0.0;
        for (int j = 0; j < 3; ++j) {
          Vec3 xp = x, xm = x;
          xp(j) += h;
          xm(j) -= h;
          const cplx fp = psi(xp), fm = psi(xm);
          grad(j) = (fp - fm) / (2 * h);
          lap += (fp - 2.0 * v + fm) / (h * h);
        }
        const Vec3 A = 0.5 * R.H.cross(x);
        const cplx Hpsi = -c.hbar * c.hbar / (2 * R.m) * lap + kI * c.hbar / R.m * (A.cast<cplx>().dot(grad)) +
                          A.squaredNorm() / (2 * R.m) * v -
                          kI * c.hbar * R.rho * (x.cast<cplx>().dot(grad) + 1.5 * v) + 0.5 * kt * x.squaredNorm() * v;
        const double scale = std::abs(psi.normalization()) * (1 + E);
        CHECK(std::abs(Hpsi - E * v) < 2e-5 * scale);
      }
    }
  }
}

TEST_CASE("grid orthonormality and variance closure") {
  const ParameterSet R = wave_params();
  const PhysicalConstants c;
  SpatialGrid grid;
  grid.points = {48, 48, 48};
  grid.lower = {-7, -7, -7};
  grid.upper = {7, 7, 7};
  const std::vector<FockIndex> nus = indices_up_to(1);
  std::vector<ComplexField> fields;
  for (const FockIndex& nu : nus) fields.push_back(fock_state(R, nu, grid, c));
  for (std::size_t i = 0; i < nus.size(); ++i)
    for (std::size_t j = 0; j < nus.size(); ++j) {
      const cplx o = grid_overlap(fields[i], fields[j]);
      CHECK(std::abs(o - (i == j ? 1.0 : 0.0)) < 1e-5);
    }
  for (std::size_t i = 0; i < nus.size(); ++i) {
    const GridMoments m = grid_moments(fields[i]);
    CHECK(m.mean.norm() < 1e-8);
    CHECK(m.covariance.trace() == doctest::Approx(stationary_variance_trace(R, nus[i], c)).epsilon(1e-5));
    CHECK((m.covariance - stationary_sigma_xx(R, nus[i], c)).cwiseAbs().maxCoeff() < 1e-5);
  }
}

TEST_CASE("threaded and serial grid evaluation agree") {
  SpatialGrid grid;
  grid.points = {9, 7, 11};
  const ComplexField a = fock_state(wave_params(), FockIndex{{1, 0, 1}}, grid, {}, 1);
  const ComplexField b = fock_state(wave_params(), FockIndex{{1, 0, 1}}, grid, {}, 4);
  CHECK(a.values == b.values);
}

TEST_CASE("overlap properties and grid mismatch") {
  SpatialGrid grid;
  grid.points = {16, 16, 16};
  const ComplexField f = fock_state(wave_params(), FockIndex{{1, 0, 0}}, grid, {});
  const ComplexField g = fock_state(wave_params(), FockIndex{{0, 1, 1}}, grid, {});
  CHECK(std::abs(grid_overlap(f, g) - std::conj(grid_overlap(g, f))) < 1e-15);
  const cplx ff = grid_overlap(f, f);
  CHECK(ff.imag() == 0.0);
  CHECK(ff.real() >= 0.0);
  SpatialGrid other = grid;
  other.points = {16, 16, 15};
  const ComplexField h = fock_state(wave_params(), FockIndex{}, other, {});
  try {
    grid_overlap(f, h);
    FAIL("expected mismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::GridMismatch);
  }
}

TEST_CASE("unit Gaussian norm on a grid") {
  SpatialGrid grid;
  grid.points = {64, 64, 64};
  ComplexField f{grid, std::vector<cplx>(grid.size())};
  for (std::size_t i = 0; i < grid.size(); ++i) f.values[i] = std::pow(kPi, -0.75) * std::exp(-0.5 * grid.point(i).squaredNorm());
  CHECK(grid_norm(f) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("vacuum time factor") {
  const ParameterSet R = wave_params();
  PhysicalConstants c;
  c.kappa_tilde = 0.3;
  ParameterSet S = R;
  S.c = 0.4;
  CHECK(vacuum_time_factor(S, FockIndex{{1, 0, 0}}, c, 0.0) == cplx(1.0));
  for (double t : {0.3, 17.0, -4.0}) CHECK(std::abs(vacuum_time_factor(S, FockIndex{{2, 1, 0}}, c, t)) ==
                                           doctest::Approx(1.0).epsilon(1e-15));
  const Frequencies f = frequencies(S, c);
  const double t = kTwoPi / (f.Omega[0] + f.Omega_nl[0]);
  const cplx ratio = vacuum_time_factor(S, FockIndex{{1, 0, 0}}, c, t) / vacuum_time_factor(S, FockIndex{}, c, t);
  CHECK(std::abs(ratio - 1.0) < 1e-12);
}

TEST_CASE("field export formats") {
  SpatialGrid grid;
  grid.points = {2, 2, 2};
  const ComplexField f = fock_state(wave_params(), FockIndex{}, grid, {});
  const std::string csv = field_to_csv(f);
  CHECK(csv.rfind("x,y,z,re,im\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 9);
  const std::string json = field_to_json(f);
  CHECK(json.find("\"values\"") != std::string::npos);
}
