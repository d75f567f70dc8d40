// circle_torsion: t2 | verify | sweep.  Exit codes: 0 pass, 2 usage error, 3 verification failure.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "cli.hpp"

namespace ct = circle_torsion;
using ct::cli::ExitCode;

namespace {

struct Common {
  ct::report::SuiteOptions options;
  int modes = 64;
  std::string json_path;
  std::string csv_path;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--modes", c.modes, "Mode truncation K for k-sums and spectral matrices")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--t-star", c.options.quad.t_star, "Crossover between k-space and dual sums")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--rel-tol", c.options.quad.rel_tol, "Quadrature relative tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--quad-nodes", c.options.quad.nodes_per_unit, "Trapezoid nodes per unit of log t")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--json", c.json_path, "Write the report as JSON");
  cmd->add_option("--csv", c.csv_path, "Write the report as CSV");
}

void finalize(Common& c) {
  c.options.modes = c.modes;
  c.options.quad.modes = c.modes;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ct::cli::UsageError("cannot open '" + path + "' for writing");
  out << text;
  if (!out.flush()) throw ct::cli::UsageError("write to '" + path + "' failed");
}

int report_outcome(const ct::report::VerificationReport& r) {
  std::size_t passed = 0;
  for (const auto& c : r.checks) passed += c.pass;
  std::printf("%zu/%zu checks passed\n", passed, r.checks.size());
  if (r.passed()) return ExitCode::exit_ok;
  for (const auto& name : r.failures()) std::fprintf(stderr, "FAILED %s\n", name.c_str());
  return ExitCode::exit_failure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Higher analytic torsion of the circle with a flat line bundle"};
  app.require_subcommand(1);

  Common t2c, vc, sc;
  double a = 0.25;
  int alpha = 1;
  auto* t2 = app.add_subcommand("t2", "Degree-2 torsion coefficient t_alpha(a): numeric and closed form");
  t2->add_option("--a", a, "Holonomy exponent in (0, 1)")->capture_default_str();
  t2->add_option("--alpha", alpha, "Fourier direction alpha >= 1")->capture_default_str();
  add_common(t2, t2c);

  std::string suite = "all";
  auto* verify = app.add_subcommand("verify", "Run verification suites");
  verify->add_option("--suite", suite, "all | grassmann | spectral | torsion | witt | sl2")->capture_default_str();
  verify->add_option("--seed", vc.options.seed, "Seed for randomized checks")->capture_default_str();
  add_common(verify, vc);

  double a_min = 0.05, a_max = 0.95;
  int steps = 19, sweep_alpha = 1, k_max = 8;
  auto* sweep = app.add_subcommand("sweep", "Tabulate T0, t_alpha, Cl, lambda and the class coefficient over a");
  sweep->add_option("--a-min", a_min, "First holonomy value")->capture_default_str();
  sweep->add_option("--a-max", a_max, "Last holonomy value")->capture_default_str();
  sweep->add_option("--steps", steps, "Number of points")->capture_default_str();
  sweep->add_option("--alpha", sweep_alpha, "Fourier direction of the t_alpha column")->capture_default_str();
  sweep->add_option("--k-max", k_max, "Basis range of the exactness fit")->capture_default_str();
  add_common(sweep, sc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return ExitCode::exit_usage;
  }

  try {
    const int threads = ct::cli::thread_cap(std::getenv("CIRCLE_TORSION_THREADS"));

    if (*t2) {
      finalize(t2c);
      const auto r = ct::cli::t2(a, alpha, t2c.options);
      std::printf("a = %.17g  alpha = %d\n", r.a, r.alpha);
      std::printf("t_alpha numeric  = %.17g i\n", r.numeric.imag());
      std::printf("t_alpha closed   = %.17g i\n", r.closed.imag() + 0.0);
      std::printf("ratio (C_conv)   = %.17g\n", r.ratio);
      std::printf("alpha * t_alpha  = %.17g i\n", r.alpha * r.numeric.imag());
      std::printf("certificate: t in [%.3g, %.3g], %d nodes, error %.3g, branch gap %.3g, truncation %.3g\n",
                  r.certificate.t_min, r.certificate.t_max, r.certificate.nodes, r.certificate.error_estimate,
                  r.certificate.branch_gap, r.certificate.truncation_bound);
      if (!t2c.json_path.empty()) write_file(t2c.json_path, ct::cli::dump(ct::cli::to_json(r)));
      if (!t2c.csv_path.empty()) write_file(t2c.csv_path, ct::cli::checks_csv(r.report));
      return report_outcome(r.report);
    }

    if (*verify) {
      finalize(vc);
      const auto r = ct::cli::verify(suite, vc.options, threads);
      for (const auto& c : r.checks) {
        std::printf("%-4s %-44s %.6g\n", c.pass ? "ok" : "FAIL", c.name.c_str(), c.value);
      }
      for (const auto& [k, v] : r.constants) std::printf("const %-40s %.17g\n", k.c_str(), v);
      if (!vc.json_path.empty()) write_file(vc.json_path, ct::cli::dump(ct::cli::to_json(r)));
      if (!vc.csv_path.empty()) write_file(vc.csv_path, ct::cli::checks_csv(r));
      return report_outcome(r);
    }

    finalize(sc);
    const auto rows = ct::cli::sweep(a_min, a_max, steps, sweep_alpha, k_max, sc.options, threads);
    const std::string csv = ct::cli::sweep_csv(rows);
    if (!sc.csv_path.empty()) write_file(sc.csv_path, csv);
    if (!sc.json_path.empty())
      write_file(sc.json_path, ct::cli::dump(ct::cli::sweep_json(rows, sweep_alpha, k_max, sc.options)));
    if (sc.csv_path.empty() && sc.json_path.empty()) std::fputs(csv.c_str(), stdout);
    return ExitCode::exit_ok;
  } catch (const ct::cli::UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return ExitCode::exit_usage;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return ExitCode::exit_usage;
  } catch (const ct::torsion::QuadratureError& e) {
    std::fprintf(stderr, "verification failure: %s\n", e.what());
    return ExitCode::exit_failure;
  } catch (const ct::torsion::ClausenError& e) {
    std::fprintf(stderr, "verification failure: %s\n", e.what());
    return ExitCode::exit_failure;
  }
}
