#include "cli.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <thread>
#include <variant>

#include "json.hpp"

#include "hberry/dynamics.hpp"
#include "hberry/error.hpp"
#include "hberry/loop_io.hpp"
#include "hberry/phases.hpp"
#include "hberry/sampling.hpp"
#include "hberry/verify.hpp"
#include "hberry/wavefield.hpp"

#ifndef HBERRY_DEFAULT_SUITE
#define HBERRY_DEFAULT_SUITE "configs/verify.json"
#endif

namespace hberry::cli {

using nlohmann::json;

namespace {

std::string g17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json nu_json(const FockIndex& nu) { return json::array({nu.n[0], nu.n[1], nu.n[2]}); }

class Table {
 public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add(std::vector<double> row) { rows_.push_back(std::move(row)); }

  std::string csv() const {
    std::string s;
    for (std::size_t i = 0; i < columns_.size(); ++i) s += (i ? "," : "") + columns_[i];
    s += '\n';
    for (const auto& row : rows_) {
      for (std::size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + g17(row[i]);
      s += '\n';
    }
    return s;
  }

  json rows_json() const {
    json rows = json::array();
    for (const auto& row : rows_) {
      json r = json::object();
      for (std::size_t i = 0; i < row.size(); ++i) r[columns_[i]] = std::isfinite(row[i]) ? json(row[i]) : json();
      rows.push_back(r);
    }
    return rows;
  }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<double>> rows_;
};

void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.out)
    write_text_file(*cfg.out, text);
  else
    out << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// Runs f(0..n-1) on a worker pool; results keep index order.
template <class R>
std::vector<R> parallel_indexed(std::size_t n, unsigned threads, const std::function<R(std::size_t)>& f) {
  std::vector<R> results(n);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < n;) results[i] = f(i);
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < std::min<std::size_t>(threads, n); ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return results;
}

ParameterLoop load(const RunConfig& cfg) {
  ParameterLoop loop = load_loop(cfg.loop);
  if (cfg.T) loop = loop.with_period(*cfg.T);
  return loop;
}

json terms_json(const BerryTerms& t) { return {{"plane", t.plane}, {"axial", t.axial}, {"magnetic", t.magnetic}}; }

json hannay_json(const HannayAngles& h) {
  return {{"theta", h.theta}, {"solid_angle", h.solid_angle}, {"solid_angle_mismatch", h.solid_angle_mismatch}};
}

int spectrum(const RunConfig& cfg, std::ostream& out) {
  const ParameterLoop loop = load(cfg);
  const int n = cfg.samples > 0 ? cfg.samples : 8;
  Table table({"s", "m", "k", "rho", "H1", "H2", "H3", "a", "b", "c", "omega_c", "omega_a", "Omega1", "Omega2",
               "Omega3", "Omega_nl1", "Omega_nl2", "Omega_nl3", "E_nu"});
  for (int i = 0; i < n; ++i) {
    const double s = static_cast<double>(i) / n;
    const ParameterSet R = loop.sample(s).value;
    const Frequencies f = frequencies(R, loop.constants());
    table.add({s, R.m, R.k, R.rho, R.H.x(), R.H.y(), R.H.z(), R.a, R.b, R.c, f.omega_c, f.omega_a, f.Omega[0],
               f.Omega[1], f.Omega[2], f.Omega_nl[0], f.Omega_nl[1], f.Omega_nl[2],
               eigenvalue(R, cfg.nu, loop.constants())});
  }
  if (cfg.format.value_or(Format::Json) == Format::Csv)
    emit(cfg, out, table.csv());
  else
    emit(cfg, out, dump({{"loop_digest", loop_digest(loop)}, {"nu", nu_json(cfg.nu)}, {"rows", table.rows_json()}}));
  return 0;
}

json phase_record(const ParameterLoop& loop, const FockIndex& nu) {
  const PhaseResult r = berry_phase(loop, nu);
  const HannayAngles h = hannay_angles(loop);
  const double hbar = loop.constants().hbar;
  return {{"loop_digest", loop_digest(loop)},
          {"nu", nu_json(nu)},
          {"T", r.T},
          {"dynamic", r.dynamic},
          {"berry", r.berry},
          {"berry_terms", terms_json(r.terms)},
          {"hannay", hannay_json(h)},
          {"diagnostics",
           {{"dynamic_action", r.dynamic_action},
            {"dynamic_unsigned", r.dynamic_action / hbar},
            {"berry_from_rates", berry_phase_from_rates(loop, nu)},
            {"berry_mod_2pi", std::remainder(r.berry, kTwoPi)},
            {"winding", azimuth_winding(loop)}}}};
}

int berry(const RunConfig& cfg, std::ostream& out) {
  const json rec = phase_record(load(cfg), cfg.nu);
  if (cfg.format.value_or(Format::Json) == Format::Csv) {
    Table t({"T", "dynamic", "berry", "plane", "axial", "magnetic"});
    const json& b = rec["berry_terms"];
    t.add({rec["T"].get<double>(), rec["dynamic"].get<double>(), rec["berry"].get<double>(), b["plane"].get<double>(),
           b["axial"].get<double>(), b["magnetic"].get<double>()});
    emit(cfg, out, t.csv());
  } else {
    emit(cfg, out, dump(rec));
  }
  return 0;
}

int hannay(const RunConfig& cfg, std::ostream& out) {
  const ParameterLoop loop = load(cfg);
  const HannayAngles h = hannay_angles(loop);
  json rec = {{"loop_digest", loop_digest(loop)},
              {"berry_terms", terms_json(h.terms)},
              {"hannay", hannay_json(h)},
              {"winding", azimuth_winding(loop)}};
  if (cfg.format.value_or(Format::Json) == Format::Csv) {
    Table t({"Theta1", "Theta2", "Theta3", "solid_angle", "solid_angle_mismatch"});
    t.add({h.theta[0], h.theta[1], h.theta[2], h.solid_angle, h.solid_angle_mismatch});
    emit(cfg, out, t.csv());
  } else {
    emit(cfg, out, dump(rec));
  }
  return 0;
}

int evolve(const RunConfig& cfg, std::ostream& out) {
  const ParameterLoop loop = load(cfg);
  const double T = loop.period();
  const int n = cfg.samples > 0 ? cfg.samples : 200;
  std::vector<double> times;
  for (int i = 0; i <= n; ++i) times.push_back(T * i / n);
  MomentState g0;
  g0.Delta2 = stationary_moments(loop.sample(0.0).value, cfg.nu, loop.constants());
  const GermBasis f0 = germ_basis(loop.sample(0.0).value, loop.constants());
  const MomentTrajectory moments = integrate_moments(loop, T, g0, cfg.tol, times);
  const GermTrajectory germs = integrate_variations(loop, T, f0, cfg.tol, times);

  Table table({"t", "s", "p1", "p2", "p3", "x1", "x2", "x3", "var_x", "uncertainty_ratio", "skew_defect", "c1_abs",
               "c1_arg", "c2_abs", "c2_arg", "c3_abs", "c3_arg"});
  for (std::size_t i = 0; i < times.size(); ++i) {
    const MomentSample& m = moments.samples.at(i);
    const GermSample& g = germs.samples.at(i);
    const double s = m.t / T;
    const GermBasis f = germ_basis(loop.sample(s).value, loop.constants());
    std::vector<double> row{m.t, s};
    for (int j = 0; j < 6; ++j) row.push_back(m.g.z(j));
    row.push_back(m.g.Delta2.block<3, 3>(3, 3).trace());
    row.push_back(m.uncertainty_ratio);
    row.push_back(g.skew_defect);
    for (int k = 0; k < 3; ++k) {
      const cplx c = skew_product(CVec6(g.a.col(k)), f[k].conjugate().vector()) / (2.0 * kI);
      row.push_back(std::abs(c));
      row.push_back(std::arg(c));
    }
    table.add(row);
  }
  if (cfg.format.value_or(Format::Csv) == Format::Csv)
    emit(cfg, out, table.csv());
  else
    emit(cfg, out,
         dump({{"loop_digest", loop_digest(loop)},
               {"nu", nu_json(cfg.nu)},
               {"T", T},
               {"uncertainty_warning", moments.uncertainty_warning},
               {"max_skew_drift", germs.max_skew_drift},
               {"rows", table.rows_json()}}));
  return 0;
}

int extract(const RunConfig& cfg, std::ostream& out) {
  const ParameterLoop loop = load(cfg);
  const std::vector<double> Ts = cfg.T_list.empty() ? std::vector<double>{50, 100, 200, 400} : cfg.T_list;
  const int samples = cfg.samples > 0 ? cfg.samples : 1024;
  const auto results = parallel_indexed<PhaseExtraction>(Ts.size(), cfg.threads, [&](std::size_t i) {
    return extract_phase_numeric(loop, cfg.mode - 1, Ts[i], cfg.tol, samples);
  });
  Table table({"T", "estimate", "closed_form", "error", "error_ratio", "final_modulus", "max_modulus_deviation",
               "adiabaticity_warning"});
  double prev = NAN;
  for (const PhaseExtraction& e : results) {
    const double err = std::abs(e.estimate - e.closed_form);
    table.add({e.T, e.estimate, e.closed_form, err, prev / err, e.final_modulus, e.max_modulus_deviation,
               e.adiabaticity_warning ? 1.0 : 0.0});
    prev = err;
  }
  if (cfg.format.value_or(Format::Csv) == Format::Csv)
    emit(cfg, out, table.csv());
  else
    emit(cfg, out,
         dump({{"loop_digest", loop_digest(loop)}, {"mode", cfg.mode}, {"rows", table.rows_json()}}));
  return 0;
}

int wavefunction(const RunConfig& cfg, std::ostream& out) {
  const ParameterLoop loop = load(cfg);
  const ParameterSet R = loop.sample(cfg.s).value;
  SpatialGrid grid;
  grid.points = {cfg.points, cfg.points, cfg.points};
  grid.lower = {-cfg.half_width, -cfg.half_width, -cfg.half_width};
  grid.upper = {cfg.half_width, cfg.half_width, cfg.half_width};
  ComplexField field = fock_state(R, cfg.nu, grid, loop.constants(), cfg.threads);
  if (cfg.t != 0.0) {
    const cplx phase = vacuum_time_factor(R, cfg.nu, loop.constants(), cfg.t);
    for (cplx& v : field.values) v *= phase;
  }
  emit(cfg, out, cfg.format.value_or(Format::Json) == Format::Csv ? field_to_csv(field) : field_to_json(field) + "\n");
  return 0;
}

int verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const SuiteReport report = cfg.loop.empty()
                                 ? run_suite(cfg.suite.empty() ? HBERRY_DEFAULT_SUITE : cfg.suite, cfg.tol, cfg.threads)
                                 : verify_loop(cfg.loop, cfg.tol);
  if (cfg.format.value_or(Format::Json) == Format::Csv) {
    std::string s = "id,passed,value,tolerance\n";
    for (const CheckReport& c : report.checks)
      s += c.id + "," + (c.passed ? "true" : "false") + "," + g17(c.value) + "," + g17(c.tolerance) + "\n";
    emit(cfg, out, s);
  } else {
    emit(cfg, out, dump(report.to_json()));
  }
  if (report.ok()) return 0;
  json failed = json::array();
  for (const CheckReport& c : report.checks)
    if (!c.passed) failed.push_back(c.id);
  err << json{{"error", std::string(to_string(ErrorCode::ToleranceFailure))},
              {"message", "verification checks failed"},
              {"failed", failed}}
             .dump()
      << "\n";
  return exit_status(ErrorCode::ToleranceFailure);
}

ParameterLoop sweep_variant(const ParameterLoop& loop, const std::string& param, double v) {
  PhysicalConstants c = loop.constants();
  if (param == "theta0") return with_latitude(loop, v);
  if (param == "T") return loop.with_period(v);
  if (param == "kappa_tilde") {
    c.kappa_tilde = v;
    return loop.with_constants(c);
  }
  if (param == "hbar") {
    c.hbar = v;
    return loop.with_constants(c);
  }
  throw Error(ErrorCode::InvalidArgument, "cannot sweep '" + param + "'");
}

int sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const ParameterLoop loop = load(cfg);
  sweep_variant(loop, cfg.sweep.param, cfg.sweep.values.front());  // reject unknown names before spawning
  using Point = std::variant<json, Error>;
  const auto points = parallel_indexed<Point>(cfg.sweep.values.size(), cfg.threads, [&](std::size_t i) -> Point {
    try {
      return phase_record(sweep_variant(loop, cfg.sweep.param, cfg.sweep.values[i]), cfg.nu);
    } catch (const Error& e) {
      return e;
    }
  });
  std::optional<Error> first;
  json rows = json::array();
  std::string csv = "index," + cfg.sweep.param +
                    ",period_T,dynamic,berry,plane,axial,magnetic,Theta1,Theta2,Theta3,solid_angle,error\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double v = cfg.sweep.values[i];
    if (const Error* e = std::get_if<Error>(&points[i])) {
      if (!first) first = *e;
      json row = {{"index", i}, {"value", v}, {"error", std::string(to_string(e->code()))}, {"message", e->what()}};
      if (e->where()) row["s"] = *e->where();
      rows.push_back(row);
      csv += std::to_string(i) + "," + g17(v) + ",,,,,,,,,,," + std::string(to_string(e->code())) + "\n";
      continue;
    }
    const json& r = std::get<json>(points[i]);
    json row = r;
    row["index"] = i;
    row["value"] = v;
    rows.push_back(row);
    csv += std::to_string(i) + "," + g17(v);
    for (const double x :
         {r["T"].get<double>(), r["dynamic"].get<double>(), r["berry"].get<double>(),
          r["berry_terms"]["plane"].get<double>(), r["berry_terms"]["axial"].get<double>(),
          r["berry_terms"]["magnetic"].get<double>(), r["hannay"]["theta"][0].get<double>(),
          r["hannay"]["theta"][1].get<double>(), r["hannay"]["theta"][2].get<double>(),
          r["hannay"]["solid_angle"].get<double>()})
      csv += "," + g17(x);
    csv += ",\n";
  }
  if (cfg.format.value_or(Format::Json) == Format::Csv)
    emit(cfg, out, csv);
  else
    emit(cfg, out, dump({{"param", cfg.sweep.param}, {"nu", nu_json(cfg.nu)}, {"points", rows}}));
  if (!first) return 0;
  err << json{{"error", std::string(to_string(first->code()))}, {"message", "some sweep points failed"}}.dump()
      << "\n";
  return exit_status(first->code());
}

}  // namespace

void RunConfig::check() const {
  static const std::vector<std::string> commands{"spectrum", "berry", "hannay", "evolve",
                                                 "extract", "wavefunction", "verify", "sweep"};
  if (std::find(commands.begin(), commands.end(), command) == commands.end())
    throw Error(ErrorCode::InvalidArgument, "unknown command '" + command + "'");
  tol.check();
  if (command != "verify" && loop.empty()) throw Error(ErrorCode::InvalidArgument, command + " needs --loop");
  if (T && !(*T > 0.0)) throw Error(ErrorCode::InvalidArgument, "--T must be positive");
  for (double x : T_list)
    if (!(x > 0.0)) throw Error(ErrorCode::InvalidArgument, "--T values must be positive");
  if (command == "extract" && (mode < 1 || mode > 3)) throw Error(ErrorCode::InvalidArgument, "--mode is 1, 2 or 3");
  if (command == "sweep" && (sweep.param.empty() || sweep.values.empty()))
    throw Error(ErrorCode::InvalidArgument, "sweep needs --param and --values");
  if (command == "wavefunction" && (points < 2 || !(half_width > 0.0)))
    throw Error(ErrorCode::InvalidArgument, "--points >= 2 and --half-width > 0 required");
  if (samples < 0) throw Error(ErrorCode::InvalidArgument, "--samples must be positive");
}

Tolerances tolerance_profile(const char* name) {
  Tolerances t;
  const std::string p = name ? name : "default";
  if (p == "default" || p.empty()) return t;
  if (p == "strict") {
    t.rtol = 1e-12;
    t.atol = 1e-14;
  } else if (p == "fast") {
    t.rtol = 1e-8;
    t.atol = 1e-10;
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown tolerance profile '" + p + "'");
  }
  return t;
}

FockIndex parse_nu(const std::string& text) {
  FockIndex nu;
  std::istringstream in(text);
  std::string part;
  int i = 0;
  while (std::getline(in, part, ',')) {
    if (i >= 3) throw Error(ErrorCode::InvalidArgument, "--nu takes three integers");
    std::size_t used = 0;
    long v = -1;
    try {
      v = std::stol(part, &used);
    } catch (const std::exception&) {
    }
    if (v < 0 || used != part.size()) throw Error(ErrorCode::InvalidArgument, "bad --nu entry '" + part + "'");
    nu.n[i++] = static_cast<unsigned>(v);
  }
  if (i != 3) throw Error(ErrorCode::InvalidArgument, "--nu takes three integers");
  return nu;
}

std::vector<double> parse_values(const std::string& text) {
  auto number = [](const std::string& s) {
    std::size_t used = 0;
    double v = NAN;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
    }
    if (used != s.size() || !std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "bad number '" + s + "'");
    return v;
  };
  std::vector<std::string> parts;
  const char sep = text.find(':') != std::string::npos ? ':' : ',';
  std::istringstream in(text);
  for (std::string p; std::getline(in, p, sep);) parts.push_back(p);
  std::vector<double> out;
  if (sep == ':') {
    if (parts.size() != 3) throw Error(ErrorCode::InvalidArgument, "range is lo:hi:n");
    const double lo = number(parts[0]), hi = number(parts[1]);
    const int n = static_cast<int>(number(parts[2]));
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "range needs n >= 1");
    for (int i = 0; i < n; ++i) out.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
  } else {
    for (const std::string& p : parts) out.push_back(number(p));
  }
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, "empty value list");
  return out;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    config.check();
    const std::string& c = config.command;
    if (c == "spectrum") return spectrum(config, out);
    if (c == "berry") return berry(config, out);
    if (c == "hannay") return hannay(config, out);
    if (c == "evolve") return evolve(config, out);
    if (c == "extract") return extract(config, out);
    if (c == "wavefunction") return wavefunction(config, out);
    if (c == "verify") return verify(config, out, err);
    return sweep(config, out, err);
  } catch (const Error& e) {
    json j = {{"error", std::string(to_string(e.code()))}, {"message", e.what()}};
    if (e.where()) j["s"] = *e.where();
    err << j.dump() << "\n";
    return exit_status(e.code());
  } catch (const std::exception& e) {
    err << json{{"error", "internal"}, {"message", e.what()}}.dump() << "\n";
    return 2;
  }
}

}  // namespace hberry::cli
