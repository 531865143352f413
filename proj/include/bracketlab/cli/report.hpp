#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "bracketlab/cli/config.hpp"
#include "bracketlab/residual_report.hpp"

namespace bracketlab::cli {

struct SuiteSummary {
  int total = 0;
  int passed = 0;
  int failed = 0;
  int artifacts = 0;
};

struct ReportBundle {
  std::string version = kToolVersion;
  SuiteConfig config;
  std::vector<ResidualReport> reports;
  double total_runtime_ms = 0.0;

  /// Artifact reports never count as failures.
  bool counts_as_failure(const ResidualReport& r) const { return !r.artifact && !r.pass; }

  bool overall_pass() const {
    return std::none_of(reports.begin(), reports.end(),
                        [&](const ResidualReport& r) { return counts_as_failure(r); });
  }

  std::map<std::string, SuiteSummary> per_suite() const {
    std::map<std::string, SuiteSummary> out;
    for (const ResidualReport& r : reports) {
      SuiteSummary& s = out[r.suite];
      ++s.total;
      if (r.artifact) ++s.artifacts;
      if (counts_as_failure(r)) ++s.failed;
      else ++s.passed;
    }
    return out;
  }

  /// Order by (suite, identity_id, seed); ties keep production order.
  void canonicalize() {
    std::stable_sort(reports.begin(), reports.end(), [](const ResidualReport& a, const ResidualReport& b) {
      return std::tie(a.suite, a.identity_id, a.seed) < std::tie(b.suite, b.identity_id, b.seed);
    });
  }

  std::vector<const ResidualReport*> failures() const {
    std::vector<const ResidualReport*> out;
    for (const ResidualReport& r : reports) {
      if (counts_as_failure(r)) out.push_back(&r);
    }
    return out;
  }
};

inline Json to_json(const ResidualReport& r, bool with_runtime = true) {
  Json j{{"suite", r.suite},         {"identity_id", r.identity_id}, {"operands", r.operands},
         {"dim", r.dim},             {"seed", r.seed},               {"residual", r.residual},
         {"tolerance", r.tolerance}, {"pass", r.pass},               {"artifact", r.artifact}};
  if (with_runtime) j["runtime_ms"] = r.runtime_ms;
  return j;
}

inline Json to_json(const ReportBundle& b, bool with_runtime = true) {
  Json reports = Json::array();
  for (const ResidualReport& r : b.reports) reports.push_back(to_json(r, with_runtime));
  Json suites = Json::object();
  int passed = 0;
  int failed = 0;
  int artifacts = 0;
  for (const auto& [name, s] : b.per_suite()) {
    suites[name] = {{"total", s.total}, {"passed", s.passed}, {"failed", s.failed}, {"artifacts", s.artifacts}};
    passed += s.passed;
    failed += s.failed;
    artifacts += s.artifacts;
  }
  Json summary{{"total", static_cast<int>(b.reports.size())},
               {"passed", passed},
               {"failed", failed},
               {"artifacts", artifacts},
               {"overall_pass", b.overall_pass()},
               {"suites", suites}};
  if (with_runtime) summary["total_runtime_ms"] = b.total_runtime_ms;
  return Json{{"version", b.version}, {"config", to_json(b.config)}, {"reports", reports}, {"summary", summary}};
}

/// JSON text with every runtime field removed; the comparison canon for
/// determinism checks.
inline std::string canonical_json(const ReportBundle& b) { return to_json(b, false).dump(2) + "\n"; }

inline ReportBundle bundle_from_json(const Json& j) {
  try {
    ReportBundle b;
    b.version = j.at("version").get<std::string>();
    b.config = config_from_json(j.at("config"));
    for (const Json& r : j.at("reports")) {
      ResidualReport x;
      x.suite = r.at("suite").get<std::string>();
      x.identity_id = r.at("identity_id").get<std::string>();
      x.operands = r.at("operands").get<std::string>();
      x.dim = r.at("dim").get<int>();
      x.seed = r.at("seed").get<std::uint64_t>();
      x.residual = r.at("residual").get<double>();
      x.tolerance = r.at("tolerance").get<double>();
      x.pass = r.at("pass").get<bool>();
      x.artifact = r.value("artifact", false);
      x.runtime_ms = r.value("runtime_ms", 0.0);
      b.reports.push_back(std::move(x));
    }
    b.total_runtime_ms = j.at("summary").value("total_runtime_ms", 0.0);
    return b;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("report: ") + e.what());
  }
}

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string md_cell(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += '\\';
    out += c;
  }
  return out;
}

inline std::string number_text(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace detail

inline const char* kCsvHeader = "suite,identity_id,operands,dim,seed,residual,tolerance,pass,artifact,runtime_ms";

inline std::string to_csv(const ReportBundle& b) {
  using detail::csv_field;
  std::ostringstream o;
  o << kCsvHeader << "\n";
  for (const ResidualReport& r : b.reports) {
    o << csv_field(r.suite) << ',' << csv_field(r.identity_id) << ',' << csv_field(r.operands) << ','
      << r.dim << ',' << r.seed << ',' << detail::format_double(r.residual) << ','
      << detail::format_double(r.tolerance) << ',' << (r.pass ? "true" : "false") << ','
      << (r.artifact ? "true" : "false") << ',' << detail::format_double(r.runtime_ms) << "\n";
  }
  return o.str();
}

/// One table per suite, in suite order.
inline std::string to_markdown(const ReportBundle& b) {
  using detail::md_cell;
  std::ostringstream o;
  o << "# bracketlab report\n\n";
  o << "version " << b.version << ", seed " << b.config.seed << ", overall "
    << (b.overall_pass() ? "PASS" : "FAIL") << "\n";
  const auto summary = b.per_suite();
  for (const auto& [suite, s] : summary) {
    o << "\n## " << suite << "\n\n"
      << s.passed << "/" << s.total << " passed";
    if (s.artifacts) o << ", " << s.artifacts << " artifact";
    o << "\n\n| identity | operands | dim | seed | residual | tolerance | result |\n"
      << "|---|---|---|---|---|---|---|\n";
    for (const ResidualReport& r : b.reports) {
      if (r.suite != suite) continue;
      const char* result = r.artifact ? (r.pass ? "artifact (defect absent)" : "artifact") : (r.pass ? "pass" : "FAIL");
      o << "| " << md_cell(r.identity_id) << " | " << md_cell(r.operands) << " | " << r.dim << " | " << r.seed
        << " | " << detail::number_text(r.residual) << " | " << detail::number_text(r.tolerance) << " | "
        << result << " |\n";
    }
  }
  return o.str();
}

inline std::string render(const ReportBundle& b, const std::string& format) {
  if (format == "json") return to_json(b).dump(2) + "\n";
  if (format == "csv") return to_csv(b);
  if (format == "markdown") return to_markdown(b);
  throw ConfigError("unknown report format: " + format);
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing " + path);
}

inline void emit_report(const ReportBundle& b, const std::string& format, const std::string& path) {
  write_file(path, render(b, format));
}

}  // namespace bracketlab::cli
