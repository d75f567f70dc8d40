#pragma once

// Small numerical building blocks shared by the spectral and torsion code.

#include <cmath>
#include <complex>
#include <type_traits>
#include <vector>

namespace circle_torsion::numerics {

inline constexpr double kPi = 3.14159265358979323846264338327950288;

/// Neumaier's variant of Kahan summation.
template <typename T>
class CompensatedSum {
 public:
  void add(T x) {
    const T t = sum_ + x;
    if constexpr (std::is_floating_point_v<T>) {
      compensation_ += std::abs(sum_) >= std::abs(x) ? (sum_ - t) + x : (x - t) + sum_;
    } else {
      compensation_ += T{component(sum_.real(), x.real(), t.real()), component(sum_.imag(), x.imag(), t.imag())};
    }
    sum_ = t;
  }
  T value() const { return sum_ + compensation_; }

 private:
  static double component(double s, double x, double t) {
    return std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
  }
  T sum_{};
  T compensation_{};
};

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1] (Newton iteration on P_n).
QuadratureRule gauss_legendre(int n);

/// Gauss-Legendre rule mapped to [lo, hi].
QuadratureRule gauss_legendre(int n, double lo, double hi);

/// Composite rule on [0, 1] with panels refined geometrically toward both
/// endpoints (breakpoints 2^-j and 1 - 2^-j, j = 1..levels).  Integrands of the
/// form poly(s) * exp(b s) with |b| up to ~2^levels are resolved to round-off.
QuadratureRule graded_unit_interval(int nodes_per_panel, int levels = 48);

/// sin(2 pi x) and cos(2 pi x) with x reduced to [-1/4, 1/4] before scaling, so
/// half-integer and integer arguments give exact zeros.
double sin_turns(double x);
double cos_turns(double x);

/// Fractional part of a * m in [-1/2, 1/2], carrying the rounding error of the product.
double frac_product(double a, long long m);

/// Modes k = 0, -1, 1, -2, 2, ... up to |k| <= radius.
std::vector<int> modes_by_magnitude(int radius);

}  // namespace circle_torsion::numerics
