#pragma once

#include <chrono>
#include <cstdint>
#include <string>

namespace bracketlab {

/// Outcome of one numerical identity check.
///
/// pass <=> residual <= tolerance. Reports flagged as artifacts document a
/// predicted truncation defect: they are expected not to pass, and a bundle
/// counts them as healthy exactly when the defect shows up.
struct ResidualReport {
  std::string suite;
  std::string identity_id;
  std::string operands;
  int dim = 0;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  bool artifact = false;
  std::uint64_t seed = 0;
  double runtime_ms = 0.0;

  static ResidualReport make(std::string identity_id, std::string operands, int dim,
                             double residual, double tolerance, std::uint64_t seed = 0) {
    ResidualReport r;
    r.identity_id = std::move(identity_id);
    r.operands = std::move(operands);
    r.dim = dim;
    r.residual = residual;
    r.tolerance = tolerance;
    r.pass = residual <= tolerance;
    r.seed = seed;
    return r;
  }

  ResidualReport& as_artifact() {
    artifact = true;
    return *this;
  }

  /// Outcome as seen by a suite: ordinary reports must pass, artifact reports
  /// must show their defect.
  bool as_expected() const { return artifact ? !pass : pass; }
};

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

/// Run `body` (returning a ResidualReport) and stamp its runtime.
template <typename F>
ResidualReport timed(F&& body) {
  Stopwatch sw;
  ResidualReport r = body();
  r.runtime_ms = sw.elapsed_ms();
  return r;
}

}  // namespace bracketlab
