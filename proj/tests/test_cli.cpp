#include "doctest.h"

#include <cmath>
#include <sstream>

#include "cli.hpp"

using namespace circle_torsion;
using namespace circle_torsion::cli;

TEST_CASE("thread cap") {
  CHECK(thread_cap("3") == 3);
  CHECK(thread_cap(nullptr) >= 1);
  CHECK(thread_cap("") >= 1);
  CHECK_THROWS_AS(thread_cap("0"), UsageError);
  CHECK_THROWS_AS(thread_cap("two"), UsageError);
  CHECK_THROWS_AS(thread_cap("4x"), UsageError);
}

TEST_CASE("parallel_for covers every index once and rethrows the first error") {
  std::vector<int> hits(100, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
  CHECK_THROWS_WITH_AS(parallel_for(10, 4,
                                    [](std::size_t i) {
                                      if (i == 3 || i == 7) throw std::runtime_error("index " + std::to_string(i));
                                    }),
                       "index 3", std::runtime_error);
}

TEST_CASE("t2 command") {
  const report::SuiteOptions o;
  CHECK_THROWS_AS(t2(0.0, 1, o), UsageError);
  CHECK_THROWS_AS(t2(1.0, 1, o), UsageError);
  CHECK_THROWS_AS(t2(0.25, 0, o), UsageError);

  const auto half = t2(0.5, 1, o);
  CHECK(half.report.passed());
  CHECK(std::abs(half.numeric) <= o.quad.abs_tol);

  const auto one = t2(0.25, 1, o);
  const auto two = t2(0.25, 2, o);
  CHECK(two.report.passed());
  CHECK(std::abs(2.0 * two.numeric.imag() - one.numeric.imag()) <= 1e-8 * std::abs(one.numeric.imag()));

  const auto j = to_json(one);
  for (const char* key : {"meta", "checks", "constants", "t2"}) CHECK(j.contains(key));
  CHECK(j["constants"].contains("C_conv"));
  CHECK(j["constants"].contains("gamma54"));
  for (const auto& c : j["checks"]) {
    for (const char* key : {"name", "anchor", "value", "reference", "tolerance", "tolerance_kind", "provenance", "pass"})
      CHECK(c.contains(key));
  }
  for (const char* key : {"numeric_im", "closed_im", "ratio", "certificate", "quadrature"}) CHECK(j["t2"].contains(key));
  CHECK(j["t2"]["certificate"].contains("error_estimate"));

  // keys come out sorted and numbers round-trip
  const std::string text = dump(j);
  CHECK(text.find("\"checks\"") < text.find("\"constants\""));
  CHECK(text.find("\"constants\"") < text.find("\"meta\""));
  CHECK(nlohmann::json::parse(text)["t2"]["numeric_im"].get<double>() == one.numeric.imag());

  auto starved = o;
  starved.quad.nodes_per_unit = 2;
  CHECK_THROWS_AS(t2(0.25, 1, starved), torsion::QuadratureError);
}

TEST_CASE("sweep table") {
  const report::SuiteOptions o;
  CHECK_THROWS_AS(sweep(0.0, 0.5, 3, 1, 8, o, 1), UsageError);
  CHECK_THROWS_AS(sweep(0.2, 1.0, 3, 1, 8, o, 1), UsageError);
  CHECK_THROWS_AS(sweep(0.6, 0.4, 3, 1, 8, o, 1), UsageError);
  CHECK_THROWS_AS(sweep(0.2, 0.4, 0, 1, 8, o, 1), UsageError);

  const auto rows = sweep(0.05, 0.95, 19, 1, 8, o, 4);
  REQUIRE(rows.size() == 19);
  CHECK(rows[9].a == 0.5);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const auto& m = rows[rows.size() - 1 - i];
    CHECK(std::abs(r.t0 - m.t0) < 1e-8);
    CHECK(std::abs(r.t_alpha_im + m.t_alpha_im) < 1e-8);
    if (i != 9) {
      CHECK(std::abs(r.t_alpha_im_over_clausen / rows[0].t_alpha_im_over_clausen - 1.0) < 1e-8);
    }
    CHECK(std::abs(r.lambda - r.class_coefficient) < 1e-10 * (1.0 + std::abs(r.lambda)));
  }
  CHECK(std::isnan(rows[9].t_alpha_im_over_clausen));
  CHECK(rows[9].t_alpha_im == 0.0);

  std::istringstream csv(sweep_csv(rows));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "a,T0,t_alpha_im,clausen,t_alpha_im_over_clausen,lambda,class_coefficient");
  int count = 0;
  while (std::getline(csv, line)) ++count;
  CHECK(count == 19);
  CHECK(sweep_csv(rows).find("0.050000000000000003,") != std::string::npos);

  // the same table regardless of the worker count
  CHECK(sweep_csv(sweep(0.05, 0.95, 19, 1, 8, o, 1)) == sweep_csv(rows));
  const auto j = sweep_json(rows, 1, 8, o);
  CHECK(j["rows"][9]["t_alpha_im_over_clausen"].is_null());
  CHECK(j["columns"].size() == sweep_columns().size());
}

TEST_CASE("verify command") {
  report::SuiteOptions o;
  CHECK_THROWS_AS(verify("nope", o, 1), std::invalid_argument);
  const auto serial = verify("sl2", o, 1);
  const auto parallel = verify("sl2", o, 4);
  CHECK(serial.passed());
  CHECK(dump(to_json(serial)) == dump(to_json(parallel)));
  bool has_volume = false;
  for (const auto& c : serial.checks) has_volume |= c.name == "sl2.volume";
  CHECK(has_volume);

  const std::string csv = checks_csv(serial);
  CHECK(csv.rfind("name,anchor,value,reference,tolerance,tolerance_kind,provenance,pass\n", 0) == 0);
  CHECK(csv.find("\"sl2.volume\",\"vol(A#(o), N#(o)) = -2\",-2,-2,9.9999999999999998e-13,absolute,published,true") !=
        std::string::npos);

  o.seed = 8;
  const auto reseeded = verify("sl2", o, 2);
  CHECK(reseeded.passed());
  CHECK(dump(to_json(reseeded)) != dump(to_json(serial)));

  const auto torsion_report = verify("torsion", report::SuiteOptions{}, 2);
  bool has_log4 = false;
  for (const auto& c : torsion_report.checks)
    has_log4 |= c.name == "torsion.T0.a=0.5" && std::abs(c.reference + std::log(4.0)) < 1e-15 && c.pass;
  CHECK(has_log4);
}

TEST_CASE("pass flag follows the recorded tolerance only") {
  using report::make_check;
  using report::Provenance;
  using report::ToleranceKind;
  CHECK(make_check("x", "", 1.0, 1.0 + 1e-9, 1e-8, ToleranceKind::absolute, Provenance::trivial).pass);
  CHECK_FALSE(make_check("x", "", 1.0, 1.1, 1e-8, ToleranceKind::absolute, Provenance::trivial).pass);
  CHECK(make_check("x", "", 100.0, 100.5, 1e-2, ToleranceKind::relative, Provenance::trivial).pass);
  CHECK_FALSE(make_check("x", "", NAN, NAN, 1.0, ToleranceKind::absolute, Provenance::trivial).pass);
}
