#pragma once

// Verification suites and the report they fill.  Each check is a record whose
// pass flag follows from its own value, reference and tolerance; nothing else
// feeds into it.  Suites are serial and seeded, so a report depends only on
// SuiteOptions.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "circle_torsion/torsion.hpp"

namespace circle_torsion::report {

/// Where the reference value comes from: a value stated in the literature,
/// an identity that holds by construction, or an independent computation.
enum class Provenance { published, trivial, derived };

enum class ToleranceKind { absolute, relative };

const char* to_string(Provenance p);
const char* to_string(ToleranceKind k);

struct CheckRecord {
  std::string name;
  /// Short statement of what is checked.
  std::string anchor;
  double value = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;
  ToleranceKind kind = ToleranceKind::absolute;
  Provenance provenance = Provenance::derived;
  bool pass = false;
};

/// Fills pass: |value - reference| <= tolerance, or <= tolerance * |reference|
/// for the relative kind.  Non-finite values fail.
CheckRecord make_check(std::string name, std::string anchor, double value, double reference, double tolerance,
                       ToleranceKind kind, Provenance provenance);

struct SuiteOptions {
  std::uint64_t seed = 7;
  int modes = 64;
  torsion::QuadratureSpec quad;
};

struct VerificationReport {
  /// Flat key -> value metadata (truncations, quadrature, seed, suites).
  std::map<std::string, std::string> meta;
  std::vector<CheckRecord> checks;
  /// Measured and published constants; always contains C_conv and gamma54.
  std::map<std::string, double> constants;

  bool passed() const;
  std::vector<std::string> failures() const;
};

const std::vector<std::string>& suite_names();

/// One suite by name; throws std::invalid_argument for an unknown name.
std::vector<CheckRecord> run_suite(const std::string& name, const SuiteOptions& options);

/// Measured constants keyed by name: C_conv at (1/4, 1), gamma54 re-derived
/// from the Gaussian moment, and the measured/published normalized
/// coefficients of the exactness constant and the class coefficient.
std::map<std::string, double> measured_constants(const SuiteOptions& options);

std::map<std::string, std::string> report_meta(const SuiteOptions& options, const std::vector<std::string>& suites);

/// "all" or a single suite name; throws std::invalid_argument otherwise.
std::vector<std::string> resolve_suites(const std::string& selector);

/// Serial assembly of the selected suites in suite_names() order.
VerificationReport run_verification(const std::string& selector, const SuiteOptions& options);

// Grids shared by the suites and the acceptance run.
const std::vector<double>& holonomy_grid();  // {0.1, 0.25, 0.37, 0.5, 0.75}
const std::vector<int>& alpha_grid();        // {1, 2, 3}
const std::vector<double>& time_grid();      // {0.05, 0.5, 5}

}  // namespace circle_torsion::report
