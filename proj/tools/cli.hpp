#pragma once

// Command implementations behind the circle_torsion executable, kept apart
// from argument parsing so tests can drive them directly.

#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

#include "circle_torsion/report.hpp"
#include "circle_torsion/torsion.hpp"

namespace circle_torsion::cli {

enum ExitCode : int { exit_ok = 0, exit_usage = 2, exit_failure = 3 };

/// Bad parameter values; mapped to exit code 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// CIRCLE_TORSION_THREADS if set (a positive integer), else the hardware
/// concurrency.  Throws UsageError on a malformed value.
int thread_cap(const char* env_value);

/// Runs fn(0..n-1) on at most `threads` workers; results go wherever fn puts them.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

/// Same report as report::run_verification, with suites spread over threads.
report::VerificationReport verify(const std::string& selector, const report::SuiteOptions& options, int threads);

struct T2Result {
  double a = 0.0;
  int alpha = 1;
  std::complex<double> numeric;
  std::complex<double> closed;
  /// numeric / closed; NaN at a = 1/2 where both vanish.
  double ratio = 0.0;
  torsion::QuadratureCertificate certificate;
  torsion::QuadratureSpec quad;
  report::VerificationReport report;
};

/// Throws UsageError unless 0 < a < 1 and alpha >= 1.  Lets QuadratureError through.
T2Result t2(double a, int alpha, const report::SuiteOptions& options);

struct SweepRow {
  double a = 0.0;
  double t0 = 0.0;
  double t_alpha_im = 0.0;
  double clausen = 0.0;
  double t_alpha_im_over_clausen = 0.0;
  double lambda = 0.0;
  double class_coefficient = 0.0;
};

/// Stable column order of the sweep table.
const std::vector<std::string>& sweep_columns();

/// `steps` equally spaced points on [a_min, a_max] (one point if steps == 1).
/// Throws UsageError unless 0 < a_min <= a_max < 1, steps >= 1, alpha >= 1, k_max >= 1.
std::vector<SweepRow> sweep(double a_min, double a_max, int steps, int alpha, int k_max,
                            const report::SuiteOptions& options, int threads);

nlohmann::json to_json(const report::VerificationReport& r);
nlohmann::json to_json(const T2Result& r);
nlohmann::json sweep_json(const std::vector<SweepRow>& rows, int alpha, int k_max, const report::SuiteOptions& options);

/// Header plus one row per check; numbers as %.17g, strings double-quoted.
std::string checks_csv(const report::VerificationReport& r);
std::string sweep_csv(const std::vector<SweepRow>& rows);

/// Canonical text of a JSON document: two-space indent, sorted keys, trailing newline.
std::string dump(const nlohmann::json& j);

}  // namespace circle_torsion::cli
