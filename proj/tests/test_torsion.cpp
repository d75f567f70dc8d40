#include "doctest.h"

#include <cmath>

#include "circle_torsion/spectral.hpp"
#include "circle_torsion/torsion.hpp"

using namespace circle_torsion;
using namespace circle_torsion::torsion;

namespace {

constexpr double kCatalan = 0.9159655941772190150546035;
constexpr double kGamma54 = 0.9064024770554770779826712889669180007488;

double rel(double x, double y) { return std::abs(x - y) / std::abs(y); }

// Brute-force partial sum of the sine series, with the Abel tail bound.
double clausen_brute(double a, long long terms) {
  long double s = 0.0L;
  for (long long m = 1; m <= terms; ++m) s += std::sin(2.0L * M_PIl * a * m) / ((long double)m * m);
  return static_cast<double>(s);
}

}  // namespace

TEST_CASE("constants") {
  CHECK(Constants::gamma54 == kGamma54);
  CHECK(Constants::catalan == kCatalan);
  CHECK(std::abs(Constants::gamma54 - std::tgamma(1.25)) < 1e-15);
}

TEST_CASE("theta sums and their duals") {
  for (double a : {0.1, 0.25, 0.37, 0.5, 0.75}) {
    CHECK(std::abs(theta_sum(a, 1.0, 64) + theta_sum(1.0 - a, 1.0, 64)) < 1e-15);
    CHECK(std::abs(heat_trace_direct(a, 0.3, 64) - heat_trace_direct(1.0 - a, 0.3, 64)) < 1e-15);
  }
  CHECK(theta_sum(0.5, 0.7, 64) == 0.0);
  CHECK(theta_sum_dual(0.5, 0.7, 64) == 0.0);
  CHECK(std::abs(theta_sum(0.25, 1.0, 64) - theta_sum_dual(0.25, 1.0, 64)) < 1e-12);
  CHECK(std::abs(theta_sum(0.25, 0.2, 64) - theta_sum_dual(0.25, 0.2, 64)) < 1e-12);
  CHECK(std::abs(theta_sum_dual(0.25, 1e-3, 64)) < 1e-100);

  const QuadratureSpec quad;
  for (double a : {0.1, 0.25, 0.37, 0.5, 0.75}) {
    const double t = quad.t_star;
    CHECK(std::abs(theta_sum(a, t, 64) - theta_sum_dual(a, t, 64)) < 1e-12);
    CHECK(std::abs(heat_trace_direct(a, t, 64) - heat_trace_dual(a, t, 64)) < 1e-12);
  }
  CHECK(heat_trace_plain(0.25, 200.0) < 1e-100);
}

TEST_CASE("degree-0 integrand") {
  const QuadratureSpec quad;
  CHECK(dual_term_weight(0, 0.01) == 0.0);
  CHECK(dual_term_weight(0, 3.7) == 0.0);
  for (double a : {0.1, 0.25, 0.5}) {
    const double t = quad.t_star;
    CHECK(rel(t0_integrand(a, t, quad, Branch::direct), t0_integrand(a, t, quad, Branch::dual)) < 1e-12);
    // finite-difference oracle for (1 + 2 t d/dt) theta / t
    for (double s : {0.05, 0.4}) {
      const double h = 1e-5 * s;
      const double th = heat_trace_plain(a, s);
      const double dth = (heat_trace_plain(a, s + h) - heat_trace_plain(a, s - h)) / (2.0 * h);
      // the two terms nearly cancel around t ~ 0.05, so compare against their size
      const double scale = (std::abs(th) + 2.0 * s * std::abs(dth)) / s;
      CHECK(std::abs(t0_integrand(a, s) - (th + 2.0 * s * dth) / s) < 1e-7 * scale);
    }
  }
}

TEST_CASE("T0 against the zeta-regularized value") {
  CHECK(std::abs(t0_numeric(HolonomyParameter(0.5)).value + std::log(4.0)) <= 1e-8);
  CHECK(std::abs(t0_numeric(HolonomyParameter(0.25)).value + std::log(2.0)) <= 1e-8);
  for (double a : {0.1, 0.25, 0.5, 0.37, 0.9}) {
    CHECK(std::abs(t0_numeric(HolonomyParameter(a)).value - t0_reference(a)) <= 1e-8);
  }
  CHECK(std::abs(t0_numeric(HolonomyParameter(0.1)).value - t0_numeric(HolonomyParameter(0.9)).value) <= 1e-8);
}

TEST_CASE("Clausen series") {
  CHECK(clausen(0.5) == 0.0);
  CHECK(clausen(0.0) == 0.0);
  CHECK(clausen(1.0) == 0.0);
  CHECK(std::abs(clausen(0.25) - kCatalan) < 1e-15);
  CHECK(std::abs(clausen(0.25, {.method = ClausenMethod::direct, .tol = 1e-12}) - kCatalan) < 1e-12);
  for (double a : {0.01, 0.1, 0.37, 0.6, 0.93}) {
    CHECK(std::abs(clausen(a) + clausen(1.0 - a)) < 1e-15);
    const double direct = clausen(a, {.method = ClausenMethod::direct, .tol = 1e-11});
    CHECK(std::abs(clausen(a) - direct) < 1e-11);
  }
  // brute force with a long-double accumulator; tail <= 2 / (sin(pi a) M^2)
  CHECK(std::abs(clausen(0.37) - clausen_brute(0.37, 2'000'000)) < 1e-12);

  CHECK_THROWS_AS(clausen(1e-9, {.method = ClausenMethod::direct, .tol = 1e-14, .max_terms = 1000}), ClausenError);
  CHECK_THROWS_AS(clausen(1.5), std::invalid_argument);
}

TEST_CASE("degree-2 integrand") {
  const QuadratureSpec quad;
  for (double t : {0.01, 0.2, 3.0}) CHECK(t2_integrand(0.5, 1, t) == 0.0);
  CHECK(rel(t2_integrand(0.25, 1, quad.t_star, quad, Branch::direct),
            t2_integrand(0.25, 1, quad.t_star, quad, Branch::dual)) < 1e-10);
  CHECK(std::abs(t2_integrand(0.25, 1, 1e-3)) < 1e-90);
  CHECK(std::abs(t2_integrand(0.25, 1, 300.0)) < 1e-100);

  // equals the graded-exponential pipeline divided by t
  const spectral::ModeSpace m(spectral::HolonomyParameter(0.37), 48);
  for (double t : {0.2, 0.9}) {
    const auto p = spectral::supertrace_pipeline(m, 2, t);
    CHECK(rel(t2_integrand(0.37, 2, t), p.coeff(2, -2).real() / t) < 1e-9);
    CHECK(std::abs(p.coeff(2, -2).imag()) < 1e-12);
  }
  // finite-difference oracle on t^{-2} (1 + 2 t d/dt) (-(4t/alpha) S)
  for (double t : {0.08, 0.5}) {
    const double h = 1e-5 * t;
    auto c2 = [](double s) { return -4.0 * s * theta_sum(0.1, s, 64) / 3.0; };
    const double d = (c2(t + h) - c2(t - h)) / (2.0 * h);
    CHECK(rel(t2_integrand(0.1, 3, t), (c2(t) + 2.0 * t * d) / (t * t)) < 1e-7);
  }
}

TEST_CASE("T2 coefficient: closed-form shape and conversion constant") {
  const double c_expected = 6.0 * std::sqrt(2.0 * M_PI) / kGamma54;
  CHECK(std::abs(expected_conversion_constant() - c_expected) < 1e-13);

  // frozen: t_1(0.25) = -6 i Catalan / pi^2
  const auto t1 = t2_numeric(HolonomyParameter(0.25), 1);
  CHECK(std::abs(t1.value.real()) == 0.0);
  CHECK(rel(t1.value.imag(), -6.0 * kCatalan / (M_PI * M_PI)) < 1e-12);
  CHECK(std::abs(t2_closed(0.25, 1).imag() + kGamma54 * kCatalan / (std::sqrt(2.0) * std::pow(M_PI, 2.5))) < 1e-16);
  CHECK(std::abs(std::abs(t2_closed(0.25, 1)) - 0.03355912007) < 1e-11);

  for (double a : {0.1, 0.25, 0.37, 0.75}) {
    const double base = t2_numeric(HolonomyParameter(a), 1).value.imag();
    for (int alpha : {1, 2, 3}) {
      const auto v = t2_numeric(HolonomyParameter(a), alpha);
      CHECK(rel(alpha * v.value.imag(), base) < 1e-9);
      CHECK(rel(v.value.imag() / clausen(a), -6.0 / (M_PI * M_PI) / alpha) < 1e-9);
      CHECK(rel((v.value / t2_closed(a, alpha)).real(), c_expected) < 1e-9);
      CHECK(std::abs(v.value + t2_numeric(HolonomyParameter(1.0 - a), alpha).value) < 1e-10);
    }
  }
  CHECK(t2_numeric(HolonomyParameter(0.5), 1).value == cplx{});
  CHECK(std::abs(t2_closed(0.75, 2) + t2_closed(0.25, 2)) < 1e-16);
  // negative directions follow from E^-a E^a = -E^a E^-a
  CHECK(std::abs(t2_numeric(HolonomyParameter(0.25), -1).value + t1.value) < 1e-15);
}

TEST_CASE("quadrature certification") {
  const QuadratureSpec base;
  const double ref0 = t0_numeric(HolonomyParameter(0.37), base).value;
  const cplx ref2 = t2_numeric(HolonomyParameter(0.37), 2, base).value;
  QuadratureSpec doubled = base;
  doubled.nodes_per_unit *= 2;
  QuadratureSpec wide = base, narrow = base;
  wide.t_star *= 2.0;
  narrow.t_star *= 0.5;
  for (const auto& q : {doubled, wide, narrow}) {
    CHECK(std::abs(t0_numeric(HolonomyParameter(0.37), q).value - ref0) <= base.rel_tol * std::abs(ref0));
    CHECK(std::abs(t2_numeric(HolonomyParameter(0.37), 2, q).value - ref2) <= base.rel_tol * std::abs(ref2));
  }
  const auto cert = t2_numeric(HolonomyParameter(0.37), 2, base).certificate;
  CHECK(cert.branch_gap < 1e-12);
  CHECK(cert.truncation_bound < 1e-30);
  CHECK(cert.nodes > 100);

  QuadratureSpec starved = base;
  starved.nodes_per_unit = 2;
  starved.rel_tol = 1e-14;
  CHECK_THROWS_AS(t2_numeric(HolonomyParameter(0.37), 2, starved), QuadratureError);
}

TEST_CASE("Gaussian moment") {
  const auto r = gaussian_moment_check();
  CHECK(std::abs(r.ratio - 1.0) < 1e-12);
  CHECK(std::abs(r.substitution_ratio - 1.0) < 1e-12);
  CHECK(r.fine_error < r.coarse_error * r.coarse_error * 1e3);
  CHECK(r.order_exponent > 1.8);
  CHECK(r.order_exponent < 2.6);
}

TEST_CASE("two-form evaluation") {
  const auto form = torsion_two_form(HolonomyParameter(0.25), 3, Provenance::closed_form);
  const std::map<int, cplx> h{{1, 2.0}, {-1, cplx(0.0, 1.0)}}, hp{{1, 0.5}, {-1, 3.0}};
  const cplx t1 = form.coeff.at(1);
  CHECK(std::abs(form.evaluate(h, hp) - t1 * (2.0 * 3.0 - 0.5 * cplx(0.0, 1.0))) < 1e-15);
  CHECK(std::abs(form.evaluate(h, hp) + form.evaluate(hp, h)) < 1e-15);
  CHECK(std::abs(form.evaluate(h, h)) == 0.0);
  CHECK(form.evaluate({{2, 1.0}}, {{1, 1.0}}) == cplx{});
  CHECK_THROWS_AS(form.evaluate({{4, 1.0}}, {{-4, 1.0}}), std::out_of_range);
}
