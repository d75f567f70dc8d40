#include "cli.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>

#include "circle_torsion/sl2.hpp"
#include "circle_torsion/witt.hpp"

namespace circle_torsion::cli {

namespace {

using cplx = std::complex<double>;
using report::CheckRecord;
using report::Provenance;
using report::ToleranceKind;

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

nlohmann::json quad_json(const torsion::QuadratureSpec& q) {
  return {{"t_star", q.t_star},         {"nodes_per_unit", q.nodes_per_unit}, {"rel_tol", q.rel_tol},
          {"abs_tol", q.abs_tol},       {"modes", q.modes},                   {"dual_terms", q.dual_terms},
          {"tail_level", q.tail_level}};
}

nlohmann::json certificate_json(const torsion::QuadratureCertificate& c) {
  return {{"t_min", c.t_min},
          {"t_max", c.t_max},
          {"nodes", c.nodes},
          {"error_estimate", c.error_estimate},
          {"branch_gap", c.branch_gap},
          {"truncation_bound", c.truncation_bound}};
}

void require(bool ok, const std::string& what) {
  if (!ok) throw UsageError(what);
}

}  // namespace

int thread_cap(const char* env_value) {
  if (env_value == nullptr || *env_value == '\0') {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
  }
  char* end = nullptr;
  const long v = std::strtol(env_value, &end, 10);
  if (*end != '\0' || v < 1 || v > 4096) {
    throw UsageError(std::string("CIRCLE_TORSION_THREADS must be a positive integer, got '") + env_value + "'");
  }
  return static_cast<int>(v);
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(threads, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  // lowest index first, so the reported error does not depend on scheduling
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

report::VerificationReport verify(const std::string& selector, const report::SuiteOptions& options, int threads) {
  const auto suites = report::resolve_suites(selector);
  std::vector<std::vector<CheckRecord>> parts(suites.size());
  std::map<std::string, double> constants;
  // the extra task computes the constants block
  parallel_for(suites.size() + 1, threads, [&](std::size_t i) {
    if (i == suites.size()) {
      constants = report::measured_constants(options);
    } else {
      parts[i] = report::run_suite(suites[i], options);
    }
  });
  report::VerificationReport r;
  r.meta = report::report_meta(options, suites);
  for (auto& p : parts) r.checks.insert(r.checks.end(), p.begin(), p.end());
  r.constants = std::move(constants);
  return r;
}

T2Result t2(double a, int alpha, const report::SuiteOptions& options) {
  require(a > 0.0 && a < 1.0, "--a must lie in (0, 1)");
  require(alpha >= 1, "--alpha must be >= 1");
  const auto& q = options.quad;
  const spectral::HolonomyParameter hp(a);

  T2Result r;
  r.a = a;
  r.alpha = alpha;
  const auto tc = torsion::t2_numeric(hp, alpha, q);
  r.numeric = tc.value;
  r.closed = torsion::t2_closed(a, alpha);
  r.certificate = tc.certificate;
  r.quad = q;
  r.ratio = std::abs(r.closed) == 0.0 ? std::numeric_limits<double>::quiet_NaN() : (r.numeric / r.closed).real();

  auto& checks = r.report.checks;
  const double allowed = std::max(q.rel_tol * std::abs(r.numeric), q.abs_tol);
  checks.push_back(report::make_check("t2.certificate", "quadrature error estimate within tolerance",
                                      tc.certificate.error_estimate, 0.0, allowed, ToleranceKind::absolute,
                                      Provenance::derived));
  if (r.closed == cplx{}) {
    checks.push_back(report::make_check("t2.vanishing_half", "t_alpha(1/2) = 0", std::abs(r.numeric), 0.0, q.abs_tol,
                                        ToleranceKind::absolute, Provenance::trivial));
  } else {
    checks.push_back(report::make_check("t2.C_conv", "numeric / closed form = C_conv", r.ratio,
                                        torsion::expected_conversion_constant(), 1e-8, ToleranceKind::relative,
                                        Provenance::derived));
    if (alpha > 1) {
      const cplx t1 = torsion::t2_numeric(hp, 1, q).value;
      checks.push_back(report::make_check("t2.alpha_law", "alpha t_alpha = t_1",
                                          static_cast<double>(alpha) * r.numeric.imag(), t1.imag(), 1e-8,
                                          ToleranceKind::relative, Provenance::derived));
    }
  }
  r.report.meta = report::report_meta(options, {});
  r.report.meta.erase("suites");
  r.report.meta.erase("seed");
  r.report.constants = {{"C_conv", r.ratio}, {"gamma54", torsion::gaussian_moment(1.0 / 16.0) / std::pow(2.0, 1.5)}};
  if (std::isnan(r.ratio)) r.report.constants.erase("C_conv");
  return r;
}

const std::vector<std::string>& sweep_columns() {
  static const std::vector<std::string> c{"a",       "T0",     "t_alpha_im", "clausen", "t_alpha_im_over_clausen",
                                          "lambda", "class_coefficient"};
  return c;
}

std::vector<SweepRow> sweep(double a_min, double a_max, int steps, int alpha, int k_max,
                            const report::SuiteOptions& options, int threads) {
  require(a_min > 0.0 && a_max < 1.0 && a_min <= a_max, "sweep range must satisfy 0 < a-min <= a-max < 1");
  require(steps >= 1, "--steps must be >= 1");
  require(alpha >= 1, "--alpha must be >= 1");
  require(k_max >= 1, "--k-max must be >= 1");
  require(steps > 1 || a_min == a_max, "a single step needs a-min == a-max");

  std::vector<SweepRow> rows(static_cast<std::size_t>(steps));
  parallel_for(rows.size(), threads, [&](std::size_t i) {
    const double s = steps == 1 ? 0.0 : static_cast<double>(i) / (steps - 1);
    const double a = (1.0 - s) * a_min + s * a_max;
    const spectral::HolonomyParameter hp(a);
    const int reach = std::max(alpha, k_max);
    const auto form = torsion::torsion_two_form(hp, reach, torsion::Provenance::numeric, options.quad);
    SweepRow& row = rows[i];
    row.a = a;
    row.t0 = torsion::t0_numeric(hp, options.quad).value;
    row.t_alpha_im = form.coeff.at(alpha).imag();
    row.clausen = torsion::clausen(a);
    row.t_alpha_im_over_clausen =
        row.clausen == 0.0 ? std::numeric_limits<double>::quiet_NaN() : row.t_alpha_im / row.clausen;
    row.lambda = witt::verify_exactness(form, k_max).lambda.real();
    row.class_coefficient = sl2::class_coefficient(form).coefficient.real();
    for (double* v : {&row.t0, &row.t_alpha_im, &row.lambda, &row.class_coefficient}) *v += 0.0;  // no -0 in output
  });
  return rows;
}

nlohmann::json to_json(const report::VerificationReport& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"anchor", c.anchor},
                      {"value", c.value},
                      {"reference", c.reference},
                      {"tolerance", c.tolerance},
                      {"tolerance_kind", report::to_string(c.kind)},
                      {"provenance", report::to_string(c.provenance)},
                      {"pass", c.pass}});
  }
  nlohmann::json meta(r.meta);
  meta["passed"] = r.passed();
  return {{"meta", meta}, {"checks", checks}, {"constants", nlohmann::json(r.constants)}};
}

nlohmann::json to_json(const T2Result& r) {
  auto j = to_json(r.report);
  j["t2"] = {{"a", r.a},
             {"alpha", r.alpha},
             {"numeric_im", r.numeric.imag()},
             {"numeric_re", r.numeric.real()},
             {"closed_im", r.closed.imag()},
             {"ratio", std::isnan(r.ratio) ? nlohmann::json() : nlohmann::json(r.ratio)},
             {"alpha_times_numeric_im", r.alpha * r.numeric.imag()},
             {"certificate", certificate_json(r.certificate)},
             {"quadrature", quad_json(r.quad)}};
  return j;
}

nlohmann::json sweep_json(const std::vector<SweepRow>& rows, int alpha, int k_max,
                          const report::SuiteOptions& options) {
  nlohmann::json table = nlohmann::json::array();
  for (const auto& r : rows) {
    const double v[] = {r.a, r.t0, r.t_alpha_im, r.clausen, r.t_alpha_im_over_clausen, r.lambda, r.class_coefficient};
    nlohmann::json row;
    for (std::size_t c = 0; c < sweep_columns().size(); ++c)
      row[sweep_columns()[c]] = std::isnan(v[c]) ? nlohmann::json() : nlohmann::json(v[c]);
    table.push_back(row);
  }
  auto meta = nlohmann::json(report::report_meta(options, {}));
  meta.erase("suites");
  meta.erase("seed");
  meta["alpha"] = alpha;
  meta["k_max"] = k_max;
  return {{"meta", meta}, {"columns", sweep_columns()}, {"rows", table}};
}

std::string checks_csv(const report::VerificationReport& r) {
  std::string out = "name,anchor,value,reference,tolerance,tolerance_kind,provenance,pass\n";
  for (const auto& c : r.checks) {
    out += quoted(c.name) + "," + quoted(c.anchor) + "," + g17(c.value) + "," + g17(c.reference) + "," +
           g17(c.tolerance) + "," + report::to_string(c.kind) + "," + report::to_string(c.provenance) + "," +
           (c.pass ? "true" : "false") + "\n";
  }
  return out;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out;
  for (std::size_t c = 0; c < sweep_columns().size(); ++c) out += (c ? "," : "") + sweep_columns()[c];
  out += "\n";
  for (const auto& r : rows) {
    out += g17(r.a) + "," + g17(r.t0) + "," + g17(r.t_alpha_im) + "," + g17(r.clausen) + "," +
           g17(r.t_alpha_im_over_clausen) + "," + g17(r.lambda) + "," + g17(r.class_coefficient) + "\n";
  }
  return out;
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace circle_torsion::cli
