#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace bracketlab::cli {

inline constexpr const char* kToolVersion = "1.0.0";

/// Invalid configuration or flags; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unreadable or unwritable files; maps to exit code 3.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline const std::vector<std::string>& all_suites() {
  static const std::vector<std::string> names{"constraints", "fields",     "heisenberg1925",
                                              "identities",  "obstruction", "reps"};
  return names;
}

/// Identity ids that --suite may name directly; each belongs to the identities suite.
inline const std::vector<std::string>& identity_ids() {
  static const std::vector<std::string> ids{"dirac_four_op",  "dirac_three_op",     "graded_jacobi",
                                            "jacobi",         "lagrange_condition", "poisson_only"};
  return ids;
}

struct SuiteConfig {
  std::uint64_t seed = 42;
  int dim_min = 2;
  int dim_max = 16;
  int trials = 200;
  std::vector<std::string> suites = all_suites();
  /// Restricts the identities suite to these identity ids (empty: all).
  std::vector<std::string> only;
  /// identity_id -> relative tolerance; "default" covers unlisted identities.
  std::map<std::string, double> tolerances{{"default", 1e-12}};
  /// Named numeric grids, e.g. f.B1 for the constraint coefficient sweep.
  std::map<std::string, std::vector<double>> grids;

  int ladder_dim = 64;
  double cubic_g = 0.01;
  int mixing_restarts = 50;
  int fermion_sites = 6;
  int boson_sites = 2;
  int boson_n_max = 3;
  double lattice_dx = 1.0;

  std::string out;
  std::string format = "json";
  bool timing = true;

  bool operator==(const SuiteConfig&) const = default;

  double tolerance_for(const std::string& id) const {
    auto it = tolerances.find(id);
    if (it != tolerances.end()) return it->second;
    it = tolerances.find("default");
    return it == tolerances.end() ? 1e-12 : it->second;
  }

  bool wants(const std::string& suite) const {
    return std::find(suites.begin(), suites.end(), suite) != suites.end();
  }

  bool wants_identity(const std::string& id) const {
    return only.empty() || std::find(only.begin(), only.end(), id) != only.end();
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

/// Shortest decimal text that parses back to the same double.
inline std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size()) throw ConfigError(key + ": not a number: '" + text + "'");
  return v;
}

inline long long parse_integer(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  char* end = nullptr;
  const long long v = std::strtoll(t.c_str(), &end, 10);
  if (t.empty() || end != t.c_str() + t.size()) throw ConfigError(key + ": not an integer: '" + text + "'");
  return v;
}

inline std::uint64_t parse_seed(const std::string& text) {
  const std::string t = trim(text);
  char* end = nullptr;
  const unsigned long long v = std::strtoull(t.c_str(), &end, 0);
  if (t.empty() || t[0] == '-' || end != t.c_str() + t.size()) throw ConfigError("seed: not a 64-bit integer: '" + text + "'");
  return v;
}

inline bool parse_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ConfigError(key + ": expected true or false");
}

inline std::string join(const std::vector<std::string>& items, const char* sep = ",") {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? sep : "") + items[i];
  return out;
}

inline std::string join_doubles(const std::vector<double>& v) {
  std::vector<std::string> parts;
  for (double d : v) parts.push_back(format_double(d));
  return join(parts);
}

}  // namespace detail

/// "a..b" or a single integer.
inline void parse_dims(const std::string& text, int& lo, int& hi) {
  const std::string t = detail::trim(text);
  const auto dots = t.find("..");
  if (dots == std::string::npos) {
    lo = hi = static_cast<int>(detail::parse_integer("dims", t));
  } else {
    lo = static_cast<int>(detail::parse_integer("dims", t.substr(0, dots)));
    hi = static_cast<int>(detail::parse_integer("dims", t.substr(dots + 2)));
  }
}

inline void validate(const SuiteConfig& c) {
  if (c.dim_min < 2 || c.dim_max > 16 || c.dim_min > c.dim_max) {
    throw ConfigError("dims must be a range inside 2..16");
  }
  if (c.trials < 1) throw ConfigError("trials must be positive");
  if (c.suites.empty()) throw ConfigError("no suites selected");
  for (const std::string& s : c.suites) {
    const auto& known = all_suites();
    if (std::find(known.begin(), known.end(), s) == known.end()) throw ConfigError("unknown suite: " + s);
  }
  for (const std::string& id : c.only) {
    const auto& known = identity_ids();
    if (std::find(known.begin(), known.end(), id) == known.end()) throw ConfigError("unknown identity: " + id);
  }
  for (const auto& [id, tol] : c.tolerances) {
    if (!(tol >= 0.0) || !std::isfinite(tol)) throw ConfigError("tolerance for " + id + " must be a finite value >= 0");
  }
  if (c.ladder_dim < 16 || c.ladder_dim > 256) throw ConfigError("heisenberg.dim must lie in 16..256");
  if (c.mixing_restarts < 1) throw ConfigError("identity.mixing_restarts must be positive");
  if (c.fermion_sites < 1 || c.fermion_sites > 10) throw ConfigError("lattice.fermion_sites must lie in 1..10");
  if (c.boson_sites < 1 || c.boson_sites > 3) throw ConfigError("lattice.boson_sites must lie in 1..3");
  if (c.boson_n_max < 1 || c.boson_n_max > 3) throw ConfigError("lattice.boson_n_max must lie in 1..3");
  if (!(c.lattice_dx > 0.0)) throw ConfigError("lattice.dx must be positive");
  if (c.format != "json" && c.format != "csv" && c.format != "markdown") {
    throw ConfigError("format must be json, csv or markdown");
  }
}

/// Apply one `key = value` setting from the given section.
inline void apply_setting(SuiteConfig& c, const std::string& section, const std::string& key,
                          const std::string& value) {
  using namespace detail;
  const std::string where = (section.empty() ? "" : section + ".") + key;
  if (section == "tolerances") {
    c.tolerances[key] = parse_double(where, value);
    return;
  }
  if (section == "grids") {
    std::vector<double> g;
    for (const std::string& part : split(value, ',')) g.push_back(parse_double(where, part));
    c.grids[key] = g;
    return;
  }
  if (section == "run" || section.empty()) {
    if (key == "seed") c.seed = parse_seed(value);
    else if (key == "dims") parse_dims(value, c.dim_min, c.dim_max);
    else if (key == "trials") c.trials = static_cast<int>(parse_integer(where, value));
    else if (key == "suites") c.suites = split(value, ',');
    else if (key == "only") c.only = split(value, ',');
    else if (key == "timing") c.timing = parse_bool(where, value);
    else throw ConfigError("unknown key " + where);
    return;
  }
  if (section == "heisenberg") {
    if (key == "dim") c.ladder_dim = static_cast<int>(parse_integer(where, value));
    else if (key == "cubic_g") c.cubic_g = parse_double(where, value);
    else throw ConfigError("unknown key " + where);
    return;
  }
  if (section == "identity") {
    if (key == "mixing_restarts") c.mixing_restarts = static_cast<int>(parse_integer(where, value));
    else throw ConfigError("unknown key " + where);
    return;
  }
  if (section == "lattice") {
    if (key == "fermion_sites") c.fermion_sites = static_cast<int>(parse_integer(where, value));
    else if (key == "boson_sites") c.boson_sites = static_cast<int>(parse_integer(where, value));
    else if (key == "boson_n_max") c.boson_n_max = static_cast<int>(parse_integer(where, value));
    else if (key == "dx") c.lattice_dx = parse_double(where, value);
    else throw ConfigError("unknown key " + where);
    return;
  }
  if (section == "output") {
    if (key == "path") c.out = trim(value);
    else if (key == "format") c.format = trim(value);
    else throw ConfigError("unknown key " + where);
    return;
  }
  throw ConfigError("unknown section [" + section + "]");
}

/// Parse the flat key-value format; starts from the defaults.
inline SuiteConfig parse_config_text(const std::string& text) {
  SuiteConfig c;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  std::set<std::string> cleared;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": bad section header");
      section = detail::trim(line.substr(1, line.size() - 2));
      // a tolerances or grids section replaces the defaults wholesale
      if ((section == "tolerances" || section == "grids") && cleared.insert(section).second) {
        if (section == "tolerances") c.tolerances.clear();
        else c.grids.clear();
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    apply_setting(c, section, detail::trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  validate(c);
  return c;
}

inline SuiteConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

/// Inverse of parse_config_text.
inline std::string to_config_text(const SuiteConfig& c) {
  using namespace detail;
  std::ostringstream o;
  o << "[run]\n"
    << "seed = " << c.seed << "\n"
    << "dims = " << c.dim_min << ".." << c.dim_max << "\n"
    << "trials = " << c.trials << "\n"
    << "suites = " << join(c.suites) << "\n"
    << "only = " << join(c.only) << "\n"
    << "timing = " << (c.timing ? "true" : "false") << "\n\n";
  o << "[tolerances]\n";
  for (const auto& [id, tol] : c.tolerances) o << id << " = " << format_double(tol) << "\n";
  o << "\n[grids]\n";
  for (const auto& [name, g] : c.grids) o << name << " = " << join_doubles(g) << "\n";
  o << "\n[heisenberg]\n"
    << "dim = " << c.ladder_dim << "\n"
    << "cubic_g = " << format_double(c.cubic_g) << "\n\n"
    << "[identity]\n"
    << "mixing_restarts = " << c.mixing_restarts << "\n\n"
    << "[lattice]\n"
    << "fermion_sites = " << c.fermion_sites << "\n"
    << "boson_sites = " << c.boson_sites << "\n"
    << "boson_n_max = " << c.boson_n_max << "\n"
    << "dx = " << format_double(c.lattice_dx) << "\n\n"
    << "[output]\n"
    << "path = " << c.out << "\n"
    << "format = " << c.format << "\n";
  return o.str();
}

using Json = nlohmann::ordered_json;

inline Json to_json(const SuiteConfig& c) {
  Json tol = Json::object();
  for (const auto& [id, t] : c.tolerances) tol[id] = t;
  Json grids = Json::object();
  for (const auto& [name, g] : c.grids) grids[name] = g;
  return Json{{"seed", c.seed},
              {"dims", {c.dim_min, c.dim_max}},
              {"trials", c.trials},
              {"suites", c.suites},
              {"only", c.only},
              {"tolerances", tol},
              {"grids", grids},
              {"heisenberg", {{"dim", c.ladder_dim}, {"cubic_g", c.cubic_g}}},
              {"identity", {{"mixing_restarts", c.mixing_restarts}}},
              {"lattice",
               {{"fermion_sites", c.fermion_sites},
                {"boson_sites", c.boson_sites},
                {"boson_n_max", c.boson_n_max},
                {"dx", c.lattice_dx}}},
              {"output", {{"path", c.out}, {"format", c.format}}},
              {"timing", c.timing}};
}

inline SuiteConfig config_from_json(const Json& j) {
  try {
    SuiteConfig c;
    c.seed = j.at("seed").get<std::uint64_t>();
    c.dim_min = j.at("dims").at(0).get<int>();
    c.dim_max = j.at("dims").at(1).get<int>();
    c.trials = j.at("trials").get<int>();
    c.suites = j.at("suites").get<std::vector<std::string>>();
    c.only = j.at("only").get<std::vector<std::string>>();
    c.tolerances.clear();
    for (const auto& [id, t] : j.at("tolerances").items()) c.tolerances[id] = t.get<double>();
    for (const auto& [name, g] : j.at("grids").items()) c.grids[name] = g.get<std::vector<double>>();
    c.ladder_dim = j.at("heisenberg").at("dim").get<int>();
    c.cubic_g = j.at("heisenberg").at("cubic_g").get<double>();
    c.mixing_restarts = j.at("identity").at("mixing_restarts").get<int>();
    c.fermion_sites = j.at("lattice").at("fermion_sites").get<int>();
    c.boson_sites = j.at("lattice").at("boson_sites").get<int>();
    c.boson_n_max = j.at("lattice").at("boson_n_max").get<int>();
    c.lattice_dx = j.at("lattice").at("dx").get<double>();
    c.out = j.at("output").at("path").get<std::string>();
    c.format = j.at("output").at("format").get<std::string>();
    c.timing = j.at("timing").get<bool>();
    validate(c);
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config echo: ") + e.what());
  }
}

}  // namespace bracketlab::cli
