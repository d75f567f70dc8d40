#pragma once

// Vector fields f d/dx on the circle in Fourier coefficients, the metric
// variation h_X = L_X dx^2, and the Lie-algebra cochains built from T_2.

#include <complex>
#include <map>

#include "circle_torsion/torsion.hpp"

namespace circle_torsion::witt {

using cplx = std::complex<double>;

/// f(x) d/dx with f = sum_k c_k e^{2 pi i k x}, finitely supported.
class VectorField {
 public:
  VectorField() = default;
  /// Throws std::invalid_argument if `real` is set and c_{-k} != conj(c_k).
  explicit VectorField(std::map<int, cplx> coeffs, bool real = false);

  /// X_k = e^{2 pi i k x} d/dx.
  static VectorField basis(int k);

  cplx coeff(int k) const;
  const std::map<int, cplx>& coeffs() const { return coeffs_; }
  bool is_real() const { return real_; }
  /// c_{-k} == conj(c_k) up to tol.
  bool satisfies_reality(double tol = 0.0) const;

  VectorField& operator+=(const VectorField& rhs);
  VectorField& operator*=(cplx s);
  friend VectorField operator+(VectorField x, const VectorField& y) { return x += y; }
  friend VectorField operator-(VectorField x, const VectorField& y) { return x += y * cplx(-1.0); }
  friend VectorField operator*(VectorField x, cplx s) { return x *= s; }
  friend VectorField operator*(cplx s, VectorField x) { return x *= s; }

 private:
  std::map<int, cplx> coeffs_;
  bool real_ = false;
};

/// h(x) dx^2 with h = sum_k h_k e^{2 pi i k x}.
struct MetricVariation {
  std::map<int, cplx> coeffs;

  cplx coeff(int k) const;
};

/// [f d/dx, g d/dx] = (f g' - g f') d/dx.
VectorField bracket(const VectorField& x, const VectorField& y);

/// h_X = -2 f' dx^2, i.e. coefficient -4 pi i k c_k.
MetricVariation metric_variation(const VectorField& x);

/// T_2(h_X ^ h_Y).
cplx lie_cocycle(const torsion::TorsionTwoForm& t, const VectorField& x, const VectorField& y);

/// u(f d/dx) = int_0^1 f dx.
cplx u_cochain(const VectorField& x);
cplx coboundary_du(const VectorField& x, const VectorField& y);

struct ExactnessReport {
  double a = 0.0;
  int k_max = 0;
  /// Least-squares lambda with lie_cocycle ~ lambda du over basis pairs.
  cplx lambda;
  /// max |lie_cocycle - lambda du| over all basis pairs.
  double residual = 0.0;
  /// lambda / (Gamma(5/4) Cl(a)); 0 when Cl(a) = 0.
  cplx normalized;
  /// -2^{3/2} pi^{3/2} Gamma(5/4) Cl(a), the constant as published, for comparison.
  double published_lambda = 0.0;
  int pairs = 0;
  bool pass = false;
};

ExactnessReport verify_exactness(spectral::HolonomyParameter a, int k_max, const torsion::QuadratureSpec& quad = {},
                                 double tol = 1e-9);

/// Same fit against a precomputed two-form (which must reach alpha = k_max).
ExactnessReport verify_exactness(const torsion::TorsionTwoForm& t, int k_max, double tol = 1e-9);

}  // namespace circle_torsion::witt
