#pragma once

// Run configuration: INI-style `key = value` files, grid ranges and the model
// presets used by the command-line tool.

#include "ckt/hamiltonian.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ckt {

/// Bad user input (config file, flag value). Mapped to exit status 2 by the CLI.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

/// Flat map of "section.key" (or "key" before the first section) to raw values.
/// `#` and `;` start comments at the beginning of a line.
using IniValues = std::map<std::string, std::string>;

inline IniValues parse_ini(std::istream& in, const std::string& source = "<config>") {
  IniValues out;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    const std::string where = source + ":" + std::to_string(lineno);
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError(where + ": unterminated section header");
      section = trim(t.substr(1, t.size() - 2));
      if (section.empty()) throw ConfigError(where + ": empty section name");
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    const std::string key = trim(t.substr(0, eq));
    if (key.empty()) throw ConfigError(where + ": missing key");
    const std::string full = section.empty() ? key : section + "." + key;
    if (out.count(full)) throw ConfigError(where + ": duplicate key '" + full + "'");
    out[full] = trim(t.substr(eq + 1));
  }
  return out;
}

inline IniValues load_ini(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file '" + path + "'");
  return parse_ini(f, path);
}

inline double parse_double(const std::string& text, const std::string& what) {
  const std::string s = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ConfigError(what + ": '" + text + "' is not a finite number");
  }
  return v;
}

/// Inclusive grid start:stop:step. The endpoint is included when it lies within
/// 1e-12 of a grid point; points are computed as start + k * step.
inline std::vector<double> parse_range(const std::string& text, const std::string& what = "range") {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() == 1) return {parse_double(parts[0], what)};
  if (parts.size() != 3) throw ConfigError(what + ": expected start:stop:step, got '" + text + "'");
  const double start = parse_double(parts[0], what);
  const double stop = parse_double(parts[1], what);
  const double step = parse_double(parts[2], what);
  if (!(step > 0.0)) throw ConfigError(what + ": step must be positive");
  if (stop < start) throw ConfigError(what + ": stop must not be below start");
  const double span = (stop - start) / step;
  if (span > 1e7) throw ConfigError(what + ": grid has too many points");
  long n = static_cast<long>(std::floor(span));
  if (start + static_cast<double>(n + 1) * step <= stop + 1e-12) ++n;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n + 1));
  for (long k = 0; k <= n; ++k) {
    const double v = start + static_cast<double>(k) * step;
    out.push_back(std::abs(v - stop) <= 1e-12 ? stop : v);
  }
  return out;
}

/// Comma-separated numbers.
inline std::vector<double> parse_list(const std::string& text, const std::string& what = "list") {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(item, what));
  if (out.empty()) throw ConfigError(what + ": empty list");
  return out;
}

enum class Preset { fp, nzt_equal, nzt_opposite, custom };

inline Preset parse_preset(const std::string& s) {
  if (s == "fp") return Preset::fp;
  if (s == "nzt-equal") return Preset::nzt_equal;
  if (s == "nzt-opposite") return Preset::nzt_opposite;
  if (s == "custom") return Preset::custom;
  throw ConfigError("unknown model '" + s + "' (fp|nzt-equal|nzt-opposite|custom)");
}

inline const char* to_string(Preset p) {
  switch (p) {
    case Preset::fp: return "fp";
    case Preset::nzt_equal: return "nzt-equal";
    case Preset::nzt_opposite: return "nzt-opposite";
    case Preset::custom: return "custom";
  }
  return "?";
}

/// Omega1 = Omega2 = 1 and the preset torsions; `custom` starts from zero torsion.
inline ModelParams preset_model(Preset p) {
  ModelParams m;
  m.omega1 = m.omega2 = 1.0;
  switch (p) {
    case Preset::fp:
    case Preset::custom: m.kappa1 = m.kappa2 = 0.0; break;
    case Preset::nzt_equal: m.kappa1 = m.kappa2 = 1.0; break;
    case Preset::nzt_opposite: m.kappa1 = 1.0; m.kappa2 = -1.0; break;
  }
  return m;
}

}  // namespace ckt
