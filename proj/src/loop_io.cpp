#include "hberry/loop_io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace hberry {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw Error(ErrorCode::InvalidConfig, where + " must be an object");
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) throw Error(ErrorCode::InvalidConfig, "unknown key '" + key + "' in " + where);
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) throw Error(ErrorCode::InvalidConfig, where + " must be a number");
  return v.get<double>();
}

Waveform parse_waveform(const json& obj, const std::string& name) {
  const std::string where = "parameters." + name;
  reject_unknown(obj, {"kind", "coefficients"}, where);
  if (!obj.contains("kind") || !obj["kind"].is_string())
    throw Error(ErrorCode::InvalidConfig, where + ".kind must be a string");
  if (!obj.contains("coefficients") || !obj["coefficients"].is_array())
    throw Error(ErrorCode::InvalidConfig, where + ".coefficients must be an array");
  std::vector<double> coeffs;
  for (const auto& v : obj["coefficients"]) coeffs.push_back(number(v, where + ".coefficients"));
  return Waveform(waveform_kind_from_string(obj["kind"].get<std::string>()), std::move(coeffs));
}

json waveform_json(const Waveform& w) {
  return {{"kind", to_string(w.kind())}, {"coefficients", w.coefficients()}};
}

}  // namespace

ParameterLoop loop_from_json(const json& doc) {
  reject_unknown(doc, {"description", "constants", "period_T", "parameters"}, "loop document");

  PhysicalConstants constants;
  if (doc.contains("constants")) {
    const json& c = doc["constants"];
    reject_unknown(c, {"hbar", "e_charge", "c_light", "kappa_tilde"}, "constants");
    if (c.contains("hbar")) constants.hbar = number(c["hbar"], "constants.hbar");
    if (c.contains("e_charge")) constants.e_charge = number(c["e_charge"], "constants.e_charge");
    if (c.contains("c_light")) constants.c_light = number(c["c_light"], "constants.c_light");
    if (c.contains("kappa_tilde")) constants.kappa_tilde = number(c["kappa_tilde"], "constants.kappa_tilde");
  }

  if (!doc.contains("period_T")) throw Error(ErrorCode::InvalidConfig, "period_T is required");
  const double T = number(doc["period_T"], "period_T");

  if (!doc.contains("parameters")) throw Error(ErrorCode::InvalidConfig, "parameters is required");
  const json& p = doc["parameters"];
  reject_unknown(p, {"m", "k", "rho", "H1", "H2", "H3", "a", "b", "c"}, "parameters");
  for (const char* required : {"m", "k"})
    if (!p.contains(required))
      throw Error(ErrorCode::InvalidConfig, std::string("parameters.") + required + " is required");

  LoopWaveforms w;
  w.k = Waveform::constant(0.0);
  auto field = [&](const char* name, Waveform& slot) {
    if (p.contains(name)) slot = parse_waveform(p[name], name);
  };
  field("m", w.m);
  field("k", w.k);
  field("rho", w.rho);
  field("H1", w.H1);
  field("H2", w.H2);
  field("H3", w.H3);
  field("a", w.a);
  field("b", w.b);
  field("c", w.c);
  return ParameterLoop(std::move(w), constants, T);
}

namespace {

json loop_json(const ParameterLoop& loop, bool with_warp) {
  const PhysicalConstants& c = loop.constants();
  const LoopWaveforms& w = loop.waveforms();
  json doc;
  doc["constants"] = {{"hbar", c.hbar}, {"e_charge", c.e_charge}, {"c_light", c.c_light},
                      {"kappa_tilde", c.kappa_tilde}};
  doc["period_T"] = loop.period();
  doc["parameters"] = {{"m", waveform_json(w.m)},   {"k", waveform_json(w.k)},   {"rho", waveform_json(w.rho)},
                       {"H1", waveform_json(w.H1)}, {"H2", waveform_json(w.H2)}, {"H3", waveform_json(w.H3)},
                       {"a", waveform_json(w.a)},   {"b", waveform_json(w.b)},   {"c", waveform_json(w.c)}};
  if (with_warp && loop.warp_epsilon() != 0.0)
    doc["warp"] = {{"epsilon", loop.warp_epsilon()}, {"harmonic", loop.warp_harmonic()}};
  return doc;
}

}  // namespace

json loop_to_json(const ParameterLoop& loop) {
  if (loop.warp_epsilon() != 0.0)
    throw Error(ErrorCode::InvalidArgument, "reparameterized loops have no document form");
  return loop_json(loop, false);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::Io, "read failed for '" + path.string() + "'");
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed for '" + path.string() + "'");
}

ParameterLoop load_loop(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidConfig, "'" + path.string() + "' is not valid JSON: " + e.what());
  }
  return loop_from_json(doc);
}

void save_loop(const ParameterLoop& loop, const std::filesystem::path& path) {
  write_text_file(path, loop_to_json(loop).dump(2) + "\n");
}

std::string loop_digest(const ParameterLoop& loop) {
  const std::string canonical = loop_json(loop, true).dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : canonical) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace hberry
