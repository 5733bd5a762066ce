#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "hberry/parameters.hpp"

namespace hberry {

/// Loop document:
///   {
///     "description": "...",                      optional
///     "constants": {"hbar", "e_charge", "c_light", "kappa_tilde"},   each optional
///     "period_T": 100,
///     "parameters": {"m": {"kind": "constant", "coefficients": [1]}, ...}
///   }
/// Parameter names are m, k, rho, H1, H2, H3, a, b, c; omitted ones are the constant 0,
/// except m and k which are required. Unknown keys anywhere raise InvalidConfig.
ParameterLoop loop_from_json(const nlohmann::json& doc);
nlohmann::json loop_to_json(const ParameterLoop& loop);

ParameterLoop load_loop(const std::filesystem::path& path);
void save_loop(const ParameterLoop& loop, const std::filesystem::path& path);

/// 16 hex digits of FNV-1a over the canonical JSON of the loop.
std::string loop_digest(const ParameterLoop& loop);

/// Reads a whole file; throws Io on failure.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace hberry
