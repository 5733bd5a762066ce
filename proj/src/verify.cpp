#include "hberry/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <random>
#include <thread>

#include <Eigen/Eigenvalues>

#include "hberry/adiabatic.hpp"
#include "hberry/dynamics.hpp"
#include "hberry/error.hpp"
#include "hberry/loop_io.hpp"
#include "hberry/phases.hpp"
#include "hberry/sampling.hpp"
#include "hberry/spectral.hpp"
#include "hberry/wavefield.hpp"

namespace hberry {

using nlohmann::json;

namespace {

struct Context {
  const json& cfg;
  std::filesystem::path base;
  Tolerances tol;

  double num(const char* key, double fallback) const { return cfg.contains(key) ? cfg.at(key).get<double>() : fallback; }
  int count(const char* key, int fallback) const { return cfg.contains(key) ? cfg.at(key).get<int>() : fallback; }
  std::uint64_t seed() const { return cfg.contains("seed") ? cfg.at("seed").get<std::uint64_t>() : 1; }

  ParameterLoop loop(const char* key = "loop") const {
    if (!cfg.contains(key)) throw Error(ErrorCode::InvalidConfig, std::string("check needs '") + key + "'");
    return load_loop(base / cfg.at(key).get<std::string>());
  }
  std::vector<double> list(const char* key, std::vector<double> fallback) const {
    return cfg.contains(key) ? cfg.at(key).get<std::vector<double>>() : fallback;
  }
  std::vector<FockIndex> indices(std::vector<FockIndex> fallback) const {
    if (!cfg.contains("nu")) return fallback;
    std::vector<FockIndex> out;
    for (const auto& v : cfg.at("nu")) out.push_back(FockIndex{v.get<std::array<unsigned, 3>>()});
    return out;
  }
};

json nu_json(const FockIndex& nu) { return json::array({nu.n[0], nu.n[1], nu.n[2]}); }

std::vector<FockIndex> indices_up_to(unsigned order) {
  std::vector<FockIndex> out;
  for (unsigned total = 0; total <= order; ++total)
    for (unsigned a = total + 1; a-- > 0;)
      for (unsigned b = total - a + 1; b-- > 0;) out.push_back(FockIndex{{a, b, total - a - b}});
  return out;
}

CheckReport finish(std::string id, std::string title, double value, double tolerance, json details = json::object()) {
  CheckReport r;
  r.id = std::move(id);
  r.title = std::move(title);
  r.value = value;
  r.tolerance = tolerance;
  r.passed = std::isfinite(value) && value <= tolerance;
  r.details = std::move(details);
  return r;
}

// eigenvalues of J ℌ_zz against ±iΩ_k
CheckReport eigen_oracle(const Context& ctx) {
  std::mt19937_64 rng(ctx.seed());
  const int n = ctx.count("count", 100);
  PhysicalConstants c;
  c.kappa_tilde = ctx.num("kappa_tilde", 0.0);
  const Mat6 J = symplectic_unit();
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const ParameterSet R = random_parameter_set(rng);
    const Frequencies f = frequencies(R, c);
    const Eigen::EigenSolver<Mat6> es(J * hessian(R, c), false);
    std::vector<double> got, want;
    double real_part = 0.0;
    for (int j = 0; j < 6; ++j) {
      got.push_back(es.eigenvalues()(j).imag());
      real_part = std::max(real_part, std::abs(es.eigenvalues()(j).real()));
    }
    for (double w : f.Omega) {
      want.push_back(w);
      want.push_back(-w);
    }
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    const double scale = *std::max_element(f.Omega.begin(), f.Omega.end());
    double err = real_part;
    for (int j = 0; j < 6; ++j) err = std::max(err, std::abs(got[j] - want[j]));
    worst = std::max(worst, err / scale);
  }
  return finish("eigen_oracle", "eigenvalues of J Hzz equal +-i Omega_k", worst, ctx.num("tolerance", 1e-9),
                {{"samples", n}});
}

CheckReport symplectic(const Context& ctx) {
  std::mt19937_64 rng(ctx.seed());
  const int n = ctx.count("count", 20);
  const double T = ctx.num("T", 100.0);
  Tolerances tol = ctx.tol;
  tol.rtol = ctx.num("rtol", tol.rtol);
  tol.atol = ctx.num("atol", tol.atol);
  const int samples = ctx.count("samples", 32);
  std::vector<double> times;
  for (int i = 1; i <= samples; ++i) times.push_back(T * i / samples);
  double worst = 0.0;
  std::size_t steps = 0;
  for (int i = 0; i < n; ++i) {
    const ParameterLoop loop = random_loop(rng, T, ctx.num("kappa_tilde", 0.0));
    const GermBasis f = germ_basis(loop.sample(0.0).value, loop.constants());
    const GermTrajectory traj = integrate_variations(loop, T, f, tol, times);
    worst = std::max(worst, traj.max_skew_drift);
    steps += traj.stats.accepted;
  }
  return finish("symplectic", "system in variations keeps {a_k, a_l*} = 2i delta_kl", worst,
                ctx.num("tolerance", 1e-8), {{"loops", n}, {"T", T}, {"rtol", tol.rtol}, {"accepted_steps", steps}});
}

CheckReport constant_exactness(const Context& ctx) {
  const ParameterLoop loop = ctx.loop();
  if (!loop.is_constant()) throw Error(ErrorCode::InvalidConfig, "constant_loop check needs a frozen loop");
  const double T = loop.period();
  const ParameterSet R = loop.sample(0.0).value;
  const GermBasis f = germ_basis(R, loop.constants());
  const Frequencies w = frequencies(R, loop.constants());
  const GermTrajectory traj = integrate_variations(loop, T, f, ctx.tol);
  const CMat63 aT = traj.samples.back().a;
  double worst = 0.0;
  for (int k = 0; k < 3; ++k)
    worst = std::max(worst, (aT.col(k) - std::exp(kI * w.Omega[k] * T) * f[k].vector()).cwiseAbs().maxCoeff());
  return finish("constant_loop", "frozen loop: a_k(T) = exp(i Omega_k T) f_k", worst, ctx.num("tolerance", 1e-8),
                {{"T", T}, {"Omega", w.Omega}});
}

CheckReport fundamental(const Context& ctx) {
  std::mt19937_64 rng(ctx.seed());
  const int n = ctx.count("count", 5);
  const double T = ctx.num("T", 50.0);
  if (T > 50.0) throw Error(ErrorCode::InvalidConfig, "fundamental_matrix check is defined for T <= 50");
  const std::vector<double> fractions = ctx.list("fractions", {0.25, 0.5, 1.0});
  const FockIndex nu = ctx.indices({FockIndex{{0, 1, 0}}}).front();
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const ParameterLoop loop = random_loop(rng, T, ctx.num("kappa_tilde", 0.0));
    MomentState g0;
    g0.Delta2 = stationary_moments(loop.sample(0.0).value, nu, loop.constants());
    std::vector<double> times;
    for (double q : fractions) times.push_back(q * T);
    const MomentTrajectory traj = integrate_moments(loop, T, g0, ctx.tol, times);
    for (const MomentSample& m : traj.samples) {
      const Mat6 A = fundamental_matrix(loop, T, m.t, ctx.tol);
      worst = std::max(worst, (m.g.Delta2 - A * g0.Delta2 * A.transpose()).cwiseAbs().maxCoeff());
    }
  }
  return finish("fundamental_matrix", "moment ODE equals A Delta2(0) A^T", worst, ctx.num("tolerance", 1e-7),
                {{"loops", n}, {"T", T}, {"nu", nu_json(nu)}});
}

CheckReport variance_convergence(const Context& ctx) {
  const ParameterLoop base = ctx.loop();
  const std::vector<double> Ts = ctx.list("T", {50, 100, 200, 400});
  const FockIndex nu = ctx.indices({FockIndex{{0, 1, 0}}}).front();
  const int samples = ctx.count("samples", 1600);  // dense enough to see the envelope of the fast oscillation
  Tolerances tol = ctx.tol;
  tol.rtol = ctx.num("rtol", 1e-12);
  tol.atol = ctx.num("atol", 1e-14);
  std::vector<double> errs;
  for (double T : Ts) {
    const ParameterLoop loop = base.with_period(T);
    MomentState g0;
    g0.Delta2 = stationary_moments(loop.sample(0.0).value, nu, loop.constants());
    std::vector<double> times;
    for (int i = 1; i < samples; ++i) times.push_back(T * i / samples);
    const MomentTrajectory traj = integrate_moments(loop, T, g0, tol, times);
    double worst = 0.0;
    for (const MomentSample& m : traj.samples) {
      const VarianceTrace vt = variance_correction_trace(loop, m.t / T, nu);
      worst = std::max(worst, std::abs(m.g.Delta2.block<3, 3>(3, 3).trace() - vt.trace0 - vt.trace1 / T));
    }
    errs.push_back(worst);
  }
  // least-squares slope of log err against log T
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < Ts.size(); ++i) {
    mx += std::log(Ts[i]) / Ts.size();
    my += std::log(errs[i]) / Ts.size();
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < Ts.size(); ++i) {
    sxy += (std::log(Ts[i]) - mx) * (std::log(errs[i]) - my);
    sxx += (std::log(Ts[i]) - mx) * (std::log(Ts[i]) - mx);
  }
  const double slope = sxy / sxx;
  const double target = ctx.num("slope", -2.0);
  return finish("variance_convergence", "variance minus two-term expansion decays as 1/T^2",
                std::abs(slope - target), ctx.num("tolerance", 0.2),
                {{"T", Ts}, {"residual", errs}, {"slope", slope}, {"nu", nu_json(nu)}});
}

CheckReport rate_extraction(const Context& ctx) {
  const double T = ctx.num("T", 400.0);
  const int mode = ctx.count("mode", 0);
  const int samples = ctx.count("samples", 1024);
  const double tolerance = ctx.num("tolerance", 5e-2);
  const double ratio_lo = ctx.num("ratio_min", 1.6), ratio_hi = ctx.num("ratio_max", 2.4);
  double worst = 0.0;
  bool ratios_ok = true;
  json per_loop = json::array();
  for (const auto& path : ctx.cfg.at("loops")) {
    const ParameterLoop loop = load_loop(ctx.base / path.get<std::string>());
    const PhaseExtraction half = extract_phase_numeric(loop, mode, T / 2, ctx.tol, samples);
    const PhaseExtraction full = extract_phase_numeric(loop, mode, T, ctx.tol, samples);
    const double e_half = std::abs(half.estimate - half.closed_form);
    const double e_full = std::abs(full.estimate - full.closed_form);
    const double ratio = e_half / e_full;
    ratios_ok = ratios_ok && ratio >= ratio_lo && ratio <= ratio_hi;
    worst = std::max(worst, e_full);
    per_loop.push_back({{"loop", path},
                        {"kappa_tilde", loop.constants().kappa_tilde},
                        {"closed_form", full.closed_form},
                        {"estimate", full.estimate},
                        {"error", e_full},
                        {"error_half_T", e_half},
                        {"ratio", ratio},
                        {"distance_to_minus_pi_mod_2pi", distance_mod_2pi(full.estimate + kPi)},
                        {"adiabaticity_warning", full.adiabaticity_warning}});
  }
  CheckReport r = finish("rate_extraction", "numeric germ phase reproduces the geometric rate integral", worst,
                         tolerance, {{"T", T}, {"mode", mode}, {"loops", per_loop}});
  r.passed = r.passed && ratios_ok;
  r.details["ratio_range"] = {ratio_lo, ratio_hi};
  return r;
}

CheckReport solid_angle_identity(const Context& ctx) {
  const ParameterLoop base = ctx.loop();
  const std::vector<double> thetas = ctx.list("theta0", {0.5, kPi / 3, 1.3, 2.0, 2.7});
  double worst = 0.0;
  json rows = json::array();
  for (double th : thetas) {
    const ParameterLoop loop = with_latitude(base, th);
    const HannayAngles h = hannay_angles(loop);
    const double mag_err = std::abs(h.terms.magnetic - kTwoPi * std::cos(th));
    const double solid_err = std::abs(h.solid_angle - kTwoPi * (1 - std::cos(th)));
    worst = std::max({worst, mag_err, solid_err});
    rows.push_back({{"theta0", th},
                    {"magnetic", h.terms.magnetic},
                    {"solid_angle", h.solid_angle},
                    {"magnetic_error", mag_err},
                    {"solid_angle_error", solid_err},
                    {"hannay_1_plus_solid_mod_2pi", h.solid_angle_mismatch},
                    {"magnetic_minus_solid_mod_2pi", distance_mod_2pi(h.terms.magnetic - h.solid_angle)}});
  }
  return finish("solid_angle", "magnetic term 2 pi cos(theta0), solid angle 2 pi (1 - cos(theta0))", worst,
                ctx.num("tolerance", 1e-9), {{"loops", rows}});
}

CheckReport linear_limit(const Context& ctx) {
  const ParameterLoop base = ctx.loop();
  PhysicalConstants c0 = base.constants();
  c0.kappa_tilde = 0.0;
  const ParameterLoop linear = base.with_constants(c0);
  const std::vector<FockIndex> nus = ctx.indices(indices_up_to(1));
  const std::vector<double> kappas = ctx.list("kappa_tilde", {1e-4, 1e-5, 1e-6});
  json diffs = json::array();
  double last = 0.0;
  for (double kt : kappas) {
    PhysicalConstants c = c0;
    c.kappa_tilde = kt;
    const ParameterLoop loop = base.with_constants(c);
    double worst = 0.0;
    for (const FockIndex& nu : nus)
      worst = std::max(worst, std::abs(berry_phase(loop, nu).berry - berry_phase(linear, nu).berry));
    diffs.push_back({{"kappa_tilde", kt}, {"difference", worst}});
    last = worst;
  }
  return finish("linear_limit", "Berry phase tends to the linear value as kappa -> 0", last,
                ctx.num("tolerance", 1e-6), {{"steps", diffs}, {"states", nus.size()}});
}

CheckReport two_form(const Context& ctx) {
  std::mt19937_64 rng(ctx.seed());
  const int n = ctx.count("count", 10);
  const std::vector<FockIndex> nus = ctx.indices(indices_up_to(2));
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const ParameterLoop loop = random_loop(rng, 100.0, ctx.num("kappa_tilde", 0.2));
    for (const FockIndex& nu : nus)
      worst = std::max(worst, std::abs(berry_phase(loop, nu).berry - berry_phase_from_rates(loop, nu)));
  }
  return finish("two_form", "contour form of gamma equals the rate assembly", worst, ctx.num("tolerance", 1e-10),
                {{"loops", n}, {"states", nus.size()}});
}

CheckReport wavefield_closure(const Context& ctx) {
  const ParameterLoop loop = ctx.loop();
  const ParameterSet R = loop.sample(ctx.num("s", 0.0)).value;
  SpatialGrid grid;
  const int pts = ctx.count("points", 64);
  const double half = ctx.num("half_width", 6.0);
  grid.points = {pts, pts, pts};
  grid.lower = {-half, -half, -half};
  grid.upper = {half, half, half};
  const std::vector<FockIndex> nus = indices_up_to(static_cast<unsigned>(ctx.count("max_order", 2)));
  std::vector<ComplexField> fields;
  for (const FockIndex& nu : nus) fields.push_back(fock_state(R, nu, grid, loop.constants()));
  double ortho = 0.0, var = 0.0;
  for (std::size_t i = 0; i < nus.size(); ++i) {
    for (std::size_t j = i; j < nus.size(); ++j)
      ortho = std::max(ortho, std::abs(grid_overlap(fields[i], fields[j]) - (i == j ? 1.0 : 0.0)));
    const GridMoments m = grid_moments(fields[i]);
    var = std::max(var, std::abs(m.covariance.trace() - stationary_variance_trace(R, nus[i], loop.constants())));
  }
  const double ortho_tol = ctx.num("orthonormality_tolerance", 1e-5);
  const double var_tol = ctx.num("variance_tolerance", 1e-4);
  CheckReport r = finish("wavefield", "grid orthonormality and variance closure", ortho, ortho_tol,
                         {{"points", pts},
                          {"half_width", half},
                          {"states", nus.size()},
                          {"orthonormality_error", ortho},
                          {"variance_error", var},
                          {"variance_tolerance", var_tol}});
  r.passed = r.passed && var <= var_tol;
  return r;
}

// invariants on one loop: validation, affine terms, reparameterization, two-form, δ/T
std::vector<CheckReport> loop_invariants(const ParameterLoop& loop, const std::string& label) {
  std::vector<CheckReport> out;
  const ValidationReport v = validate_loop(loop);
  json failed = json::array();
  for (const CheckOutcome& c : v.checks)
    if (!c.passed) failed.push_back(c.name);
  CheckReport valid = finish("loop_valid", label + ": loop passes validation", v.ok() ? 0.0 : 1.0, 0.0,
                             {{"failed", failed}});
  out.push_back(valid);
  if (!v.ok()) return out;

  const BerryTerms terms = berry_terms(loop);
  double affine = 0.0, two = 0.0, reparam = 0.0;
  const ParameterLoop warped = loop.reparameterized(0.3, 2);
  for (const FockIndex& nu : indices_up_to(2)) {
    const double g = berry_phase(loop, nu).berry;
    affine = std::max(affine, std::abs(g - terms.combine(nu)));
    two = std::max(two, std::abs(g - berry_phase_from_rates(loop, nu)));
    reparam = std::max(reparam, std::abs(g - berry_phase(warped, nu).berry));
  }
  const FockIndex nu{{1, 0, 0}};
  const double T = loop.period();
  const double scaling = std::abs(dynamic_phase(loop, nu, T) / T - dynamic_phase(loop, nu, 2 * T) / (2 * T));
  out.push_back(finish("berry_affine", label + ": Berry terms reconstruct gamma", affine, 1e-12));
  out.push_back(finish("berry_two_form", label + ": contour form equals rate assembly", two, 1e-10));
  out.push_back(finish("berry_reparameterization", label + ": gamma invariant under s -> sigma(s)", reparam, 1e-9));
  out.push_back(finish("dynamic_scaling", label + ": dynamic phase / T independent of T", scaling, 1e-12));
  return out;
}

using CheckFn = std::function<CheckReport(const Context&)>;

const std::vector<std::pair<std::string, CheckFn>>& registry() {
  static const std::vector<std::pair<std::string, CheckFn>> r{
      {"eigen_oracle", eigen_oracle},
      {"symplectic", symplectic},
      {"constant_loop", constant_exactness},
      {"fundamental_matrix", fundamental},
      {"variance_convergence", variance_convergence},
      {"rate_extraction", rate_extraction},
      {"solid_angle", solid_angle_identity},
      {"linear_limit", linear_limit},
      {"two_form", two_form},
      {"wavefield", wavefield_closure},
  };
  return r;
}

CheckReport failed_report(const std::string& id, const Error& e) {
  CheckReport r;
  r.id = id;
  r.title = "error";
  r.passed = false;
  r.value = std::numeric_limits<double>::infinity();
  r.details = {{"error", std::string(to_string(e.code()))}, {"message", e.what()}};
  return r;
}

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

bool SuiteReport::ok() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const CheckReport& c) { return c.passed; });
}

json SuiteReport::to_json() const {
  json rows = json::array();
  for (const CheckReport& c : checks)
    rows.push_back({{"id", c.id},
                    {"title", c.title},
                    {"passed", c.passed},
                    {"value", number_or_null(c.value)},
                    {"tolerance", c.tolerance},
                    {"details", c.details}});
  return {{"passed", ok()}, {"checks", rows}};
}

const std::vector<std::string>& check_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v;
    for (const auto& [id, fn] : registry()) v.push_back(id);
    return v;
  }();
  return ids;
}

CheckReport run_check(const std::string& id, const json& settings, const std::filesystem::path& base_dir,
                      const Tolerances& tol) {
  for (const auto& [name, fn] : registry()) {
    if (name != id) continue;
    try {
      return fn(Context{settings, base_dir, tol});
    } catch (const json::exception& e) {
      throw Error(ErrorCode::InvalidConfig, "check '" + id + "': " + e.what());
    }
  }
  throw Error(ErrorCode::InvalidConfig, "unknown check '" + id + "'");
}

SuiteReport run_suite(const std::filesystem::path& suite_file, const Tolerances& tol, unsigned threads) {
  json doc;
  try {
    doc = json::parse(read_text_file(suite_file));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidConfig, "'" + suite_file.string() + "' is not valid JSON: " + e.what());
  }
  if (!doc.is_object() || !doc.contains("checks") || !doc.at("checks").is_object())
    throw Error(ErrorCode::InvalidConfig, "suite needs a 'checks' object");
  for (const auto& [key, value] : doc.items())
    if (key != "seed" && key != "checks" && key != "loops" && key != "description")
      throw Error(ErrorCode::InvalidConfig, "unknown key '" + key + "' in suite");
  const std::filesystem::path base = suite_file.parent_path();

  struct Job {
    std::string id;
    json settings;
  };
  std::vector<Job> jobs;
  for (const auto& [key, value] : doc.at("checks").items()) {
    if (std::find(check_ids().begin(), check_ids().end(), key) == check_ids().end())
      throw Error(ErrorCode::InvalidConfig, "unknown check '" + key + "'");
  }
  for (const std::string& id : check_ids()) {
    if (!doc.at("checks").contains(id)) continue;
    json s = doc.at("checks").at(id);
    if (!s.contains("seed") && doc.contains("seed")) s["seed"] = doc.at("seed");
    jobs.push_back({id, s});
  }

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::vector<CheckReport>> results(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex fatal_mutex;
  std::optional<Error> first_fatal;
  auto worker = [&] {
    for (std::size_t i; (i = next++) < jobs.size();) {
      try {
        results[i].push_back(run_check(jobs[i].id, jobs[i].settings, base, tol));
      } catch (const Error& e) {
        if (e.code() == ErrorCode::InvalidConfig || e.code() == ErrorCode::Io) {
          std::lock_guard lock(fatal_mutex);
          if (!first_fatal) first_fatal = e;
        }
        results[i].push_back(failed_report(jobs[i].id, e));
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < std::min<unsigned>(threads, jobs.size()); ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (first_fatal) throw *first_fatal;

  SuiteReport report;
  for (auto& r : results) report.checks.insert(report.checks.end(), r.begin(), r.end());
  if (doc.contains("loops")) {
    for (const auto& path : doc.at("loops")) {
      const std::string name = path.get<std::string>();
      for (CheckReport& c : loop_invariants(load_loop(base / name), name)) {
        c.id = name + ":" + c.id;
        report.checks.push_back(std::move(c));
      }
    }
  }
  return report;
}

SuiteReport verify_loop(const std::filesystem::path& loop_file, const Tolerances&) {
  SuiteReport report;
  report.checks = loop_invariants(load_loop(loop_file), loop_file.filename().string());
  return report;
}

}  // namespace hberry
