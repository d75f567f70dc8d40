#include "doctest.h"

#include <cmath>
#include <random>

#include "circle_torsion/witt.hpp"

using namespace circle_torsion;
using namespace circle_torsion::witt;
using torsion::Provenance;

namespace {

constexpr double kCatalan = 0.9159655941772190150546035;
const cplx kI{0.0, 1.0};

double max_diff(const VectorField& x, const VectorField& y) {
  double err = 0.0;
  const VectorField d = x - y;
  for (const auto& [k, c] : d.coeffs()) err = std::max(err, std::abs(c));
  return err;
}

// Closed-form two-form reaching alpha = 8, shared by the algebraic tests.
const torsion::TorsionTwoForm& form_025() {
  static const auto t = torsion::torsion_two_form(spectral::HolonomyParameter(0.25), 8, Provenance::numeric);
  return t;
}

VectorField random_field(std::mt19937_64& gen, int radius) {
  std::normal_distribution<double> n;
  std::map<int, cplx> c;
  for (int k = -radius; k <= radius; ++k) c[k] = {n(gen), n(gen)};
  return VectorField(c);
}

}  // namespace

TEST_CASE("bracket") {
  for (int k = -3; k <= 3; ++k) {
    for (int h = -3; h <= 3; ++h) {
      const auto b = bracket(VectorField::basis(k), VectorField::basis(h));
      const auto expected = VectorField::basis(k + h) * (2.0 * M_PI * kI * static_cast<double>(h - k));
      CHECK(max_diff(b, expected) < 1e-13);
    }
  }
  const auto x1 = VectorField::basis(1), x2 = VectorField::basis(2), x3 = VectorField::basis(-3);
  CHECK(bracket(x1, x1).coeffs().empty());
  const auto jacobi = bracket(x1, bracket(x2, x3)) + bracket(x2, bracket(x3, x1)) + bracket(x3, bracket(x1, x2));
  CHECK(max_diff(jacobi, VectorField{}) < 1e-10);

  std::mt19937_64 gen(3);
  const auto x = random_field(gen, 3), y = random_field(gen, 3);
  CHECK(max_diff(bracket(x, y), bracket(y, x) * cplx(-1.0)) < 1e-12);
}

TEST_CASE("reality flag") {
  CHECK_THROWS_AS(VectorField({{1, 1.0}}, true), std::invalid_argument);
  const VectorField real({{1, cplx(1.0, 2.0)}, {-1, cplx(1.0, -2.0)}, {0, 0.5}}, true);
  CHECK(real.is_real());
  CHECK(bracket(real, VectorField({{2, kI}, {-2, -kI}}, true)).is_real());
}

TEST_CASE("metric variation") {
  for (int k = -4; k <= 4; ++k) {
    const auto h = metric_variation(VectorField::basis(k));
    CHECK(std::abs(h.coeff(k) - (-4.0 * M_PI * kI * static_cast<double>(k))) < 1e-13);
  }
  CHECK(metric_variation(VectorField::basis(0)).coeffs.empty());
  // A* = (1/2 pi i)(e^{2 pi i x} - e^{-2 pi i x}) d/dx -> h = -4 cos(2 pi x)
  const VectorField a_star({{1, 1.0 / (2.0 * M_PI * kI)}, {-1, -1.0 / (2.0 * M_PI * kI)}});
  const auto h = metric_variation(a_star);
  CHECK(std::abs(h.coeff(1) + 2.0) < 1e-15);
  CHECK(std::abs(h.coeff(-1) + 2.0) < 1e-15);
}

TEST_CASE("u and du") {
  CHECK(u_cochain(VectorField::basis(0)) == cplx(1.0));
  CHECK(u_cochain(VectorField::basis(3)) == cplx{});
  const VectorField n_star({{1, 1.0 / (4.0 * M_PI)}, {-1, 1.0 / (4.0 * M_PI)}, {0, 2.0 / (4.0 * M_PI)}});
  CHECK(std::abs(u_cochain(n_star) - 1.0 / (2.0 * M_PI)) < 1e-16);
  for (int k = -5; k <= 5; ++k) {
    for (int h = -5; h <= 5; ++h) {
      const auto xk = VectorField::basis(k), xh = VectorField::basis(h);
      const cplx expected = k + h == 0 ? -4.0 * M_PI * kI * static_cast<double>(k) : cplx{};
      CHECK(std::abs(coboundary_du(xk, xh) - expected) < 1e-12);
      CHECK(coboundary_du(xk, xh) == -coboundary_du(xh, xk));
    }
  }
}

TEST_CASE("lie cocycle on basis fields") {
  const auto& t = form_025();
  for (int k = -4; k <= 4; ++k) {
    for (int h = -4; h <= 4; ++h) {
      const cplx v = lie_cocycle(t, VectorField::basis(k), VectorField::basis(h));
      if (k + h != 0 || k == 0) {
        CHECK(v == cplx{});
      } else {
        // frozen: -96 i k Catalan at a = 1/4
        CHECK(std::abs(v - (-96.0 * kI * static_cast<double>(k) * kCatalan)) < 1e-9);
      }
    }
  }
  CHECK_THROWS_AS(lie_cocycle(t, VectorField::basis(9), VectorField::basis(-9)), std::out_of_range);
}

TEST_CASE("lie cocycle is bilinear, antisymmetric and closed") {
  const auto& t = form_025();
  std::mt19937_64 gen(99);
  for (int trial = 0; trial < 10; ++trial) {
    const auto x = random_field(gen, 4), y = random_field(gen, 4), z = random_field(gen, 4);
    const cplx s(0.3, -1.2);
    CHECK(std::abs(lie_cocycle(t, x + s * z, y) - lie_cocycle(t, x, y) - s * lie_cocycle(t, z, y)) < 1e-12 * 1e3);
    CHECK(std::abs(lie_cocycle(t, x, y) + lie_cocycle(t, y, x)) < 1e-12);
  }
  for (int i = -4; i <= 4; ++i) {
    for (int j = -4; j <= 4; ++j) {
      for (int k = -4; k <= 4; ++k) {
        const auto x = VectorField::basis(i), y = VectorField::basis(j), z = VectorField::basis(k);
        const cplx d = lie_cocycle(t, bracket(x, y), z) - lie_cocycle(t, bracket(x, z), y) + lie_cocycle(t, bracket(y, z), x);
        CHECK(std::abs(d) < 1e-10);
      }
    }
  }
}

TEST_CASE("reality on real vector fields") {
  const auto& t = form_025();
  const VectorField x({{1, cplx(0.4, 1.0)}, {-1, cplx(0.4, -1.0)}, {0, 2.0}}, true);
  const VectorField y({{-1, cplx(2.0, 0.5)}, {1, cplx(2.0, -0.5)}, {2, kI}, {-2, -kI}}, true);
  CHECK(std::abs(lie_cocycle(t, x, y).imag()) < 1e-10);
  CHECK(std::abs(lie_cocycle(t, x, y)) > 1.0);
}

TEST_CASE("exactness fit") {
  const auto r = verify_exactness(spectral::HolonomyParameter(0.25), 8);
  CHECK(r.pass);
  CHECK(r.residual <= 1e-10);
  CHECK(r.pairs == 17 * 17);
  // frozen: lambda = 24 Catalan / pi, real
  CHECK(std::abs(r.lambda - 24.0 * kCatalan / M_PI) < 1e-10);
  CHECK(std::abs(r.normalized - 24.0 / (M_PI * torsion::Constants::gamma54)) < 1e-10);
  CHECK(r.published_lambda < 0.0);

  const auto half = verify_exactness(spectral::HolonomyParameter(0.5), 8);
  CHECK(half.lambda == cplx{});
  CHECK(half.residual == 0.0);

  const auto mirror = verify_exactness(spectral::HolonomyParameter(0.75), 8);
  CHECK(std::abs(mirror.lambda + r.lambda) < 1e-10);
}
