#include "circle_torsion/numerics.hpp"

#include <stdexcept>

namespace circle_torsion::numerics {

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

QuadratureRule gauss_legendre(int n, double lo, double hi) {
  QuadratureRule rule = gauss_legendre(n);
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    rule.nodes[i] = mid + half * rule.nodes[i];
    rule.weights[i] *= half;
  }
  return rule;
}

QuadratureRule graded_unit_interval(int nodes_per_panel, int levels) {
  std::vector<double> breaks{0.0};
  for (int j = levels; j >= 1; --j) breaks.push_back(std::ldexp(1.0, -j));
  for (int j = 2; j <= levels; ++j) breaks.push_back(1.0 - std::ldexp(1.0, -j));
  breaks.push_back(1.0);

  const QuadratureRule base = gauss_legendre(nodes_per_panel);
  QuadratureRule rule;
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double half = 0.5 * (breaks[p + 1] - breaks[p]);
    const double mid = 0.5 * (breaks[p + 1] + breaks[p]);
    for (std::size_t i = 0; i < base.nodes.size(); ++i) {
      rule.nodes.push_back(mid + half * base.nodes[i]);
      rule.weights.push_back(half * base.weights[i]);
    }
  }
  return rule;
}

namespace {
// r in [-1/2, 1/2] -> angle in [-1/4, 1/4] turns with the same sine
double fold_for_sine(double r) {
  if (r > 0.25) return 0.5 - r;
  if (r < -0.25) return -0.5 - r;
  return r;
}
}  // namespace

double sin_turns(double x) {
  const double r = x - std::nearbyint(x);
  return std::sin(2.0 * kPi * fold_for_sine(r));
}

double cos_turns(double x) {
  // cos(2 pi x) = sin(2 pi (x + 1/4)) but that shift rounds; fold directly instead.
  double r = std::abs(x - std::nearbyint(x));  // [0, 1/2]
  if (r == 0.25) return 0.0;
  if (r > 0.25) return -std::cos(2.0 * kPi * (0.5 - r));
  return std::cos(2.0 * kPi * r);
}

double frac_product(double a, long long m) {
  const double md = static_cast<double>(m);
  const double p = a * md;
  const double err = std::fma(a, md, -p);
  const double r = (p - std::nearbyint(p)) + err;
  return r - std::nearbyint(r);
}

std::vector<int> modes_by_magnitude(int radius) {
  std::vector<int> out{0};
  for (int k = 1; k <= radius; ++k) {
    out.push_back(-k);
    out.push_back(k);
  }
  return out;
}

}  // namespace circle_torsion::numerics
