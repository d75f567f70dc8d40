#pragma once

// Exterior algebra on the dual directions E^alpha, truncated at degree 2, and
// the super tensor product of that algebra with finite matrices acting on a
// Z/2-graded space (Omega^0 (+) Omega^1 for the circle).
//
// Sign contract for the super tensor product:
//
//   (w (x) A)(n (x) B) = (-1)^{p(A) |n|} (w n) (x) (A B)
//
// where |n| is the Grassmann degree of n and p(A) the parity of A under the
// form-degree grading z.  For a matrix of mixed parity the sign is applied
// per parity component, which is the same as replacing A by z A z whenever
// |n| is odd.  Products of Grassmann degree > 2 are dropped; since the
// truncation is a quotient of the algebra, everything of degree <= 2 is exact.

#include <array>
#include <complex>
#include <compare>
#include <map>
#include <span>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace circle_torsion::grassmann {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// A product of at most two distinct generators, stored in ascending order.
class Monomial {
 public:
  Monomial() = default;

  static Monomial unit() { return {}; }
  static Monomial generator(int alpha);
  /// Canonical monomial for {alpha, beta}; requires alpha != beta.
  static Monomial pair(int alpha, int beta);

  int degree() const { return degree_; }
  int parity() const { return degree_ % 2; }
  std::span<const int> generators() const { return {gens_.data(), static_cast<std::size_t>(degree_)}; }

  std::string to_string() const;

  auto operator<=>(const Monomial&) const = default;

 private:
  int degree_ = 0;
  std::array<int, 2> gens_{};
};

struct SignedMonomial {
  int sign = 0;  // 0 when the product vanishes
  Monomial monomial;
};

/// Product of two monomials in the truncated algebra.
SignedMonomial multiply(const Monomial& lhs, const Monomial& rhs);

/// Sign and canonical monomial of the ordered product E^alpha E^beta.
SignedMonomial ordered_pair(int alpha, int beta);

class GrassmannPoly2 {
 public:
  GrassmannPoly2() = default;
  explicit GrassmannPoly2(cplx scalar);

  static GrassmannPoly2 generator(int alpha, cplx coefficient = 1.0);
  /// coefficient * E^alpha E^beta (in that order).
  static GrassmannPoly2 ordered(int alpha, int beta, cplx coefficient = 1.0);

  cplx scalar() const { return coeff(Monomial::unit()); }
  cplx coeff(int alpha) const { return coeff(Monomial::generator(alpha)); }
  /// Coefficient of E^alpha E^beta in that order; swapping the indices negates it.
  cplx coeff(int alpha, int beta) const;
  cplx coeff(const Monomial& m) const;

  void add(const Monomial& m, cplx value);
  const std::map<Monomial, cplx>& terms() const { return terms_; }

  /// Image under E^alpha -> factor * E^alpha for every generator.
  GrassmannPoly2 rescaled(double factor) const;

  GrassmannPoly2& operator+=(const GrassmannPoly2& rhs);
  GrassmannPoly2& operator-=(const GrassmannPoly2& rhs);
  GrassmannPoly2& operator*=(cplx s);

  friend GrassmannPoly2 operator+(GrassmannPoly2 a, const GrassmannPoly2& b) { return a += b; }
  friend GrassmannPoly2 operator-(GrassmannPoly2 a, const GrassmannPoly2& b) { return a -= b; }
  friend GrassmannPoly2 operator*(GrassmannPoly2 a, cplx s) { return a *= s; }
  friend GrassmannPoly2 operator*(cplx s, GrassmannPoly2 a) { return a *= s; }

 private:
  std::map<Monomial, cplx> terms_;
};

GrassmannPoly2 gr_mul(const GrassmannPoly2& x, const GrassmannPoly2& y);
inline GrassmannPoly2 operator*(const GrassmannPoly2& x, const GrassmannPoly2& y) { return gr_mul(x, y); }

/// Dimensions of the z-even (leading) and z-odd (trailing) summands.
struct SuperDims {
  Eigen::Index even = 0;
  Eigen::Index odd = 0;

  Eigen::Index total() const { return even + odd; }
  bool operator==(const SuperDims&) const = default;
};

/// z A z: flips the sign of the parity-odd (off-diagonal) blocks.
Matrix parity_conjugate(const Matrix& a, SuperDims dims);
Matrix even_part(const Matrix& a, SuperDims dims);
Matrix odd_part(const Matrix& a, SuperDims dims);

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Element of Gr(V*)_{<=2} (x) End(C^even (+) C^odd).
class GradedOperator {
 public:
  explicit GradedOperator(SuperDims dims);

  static GradedOperator identity(SuperDims dims);
  static GradedOperator from_matrix(SuperDims dims, const Matrix& deg0);

  SuperDims dims() const { return dims_; }

  /// Accumulates coefficient-matrix m onto the given monomial.
  void add_block(const Monomial& monomial, const Matrix& m);
  const std::map<Monomial, Matrix>& blocks() const { return blocks_; }
  /// Block for the monomial, or a zero matrix.
  Matrix block(const Monomial& monomial) const;
  /// Coefficient of E^alpha E^beta in that order.
  Matrix ordered_block(int alpha, int beta) const;

  Matrix even_block(const Monomial& monomial) const { return even_part(block(monomial), dims_); }
  Matrix odd_block(const Monomial& monomial) const { return odd_part(block(monomial), dims_); }

  /// Image under E^alpha -> factor * E^alpha.
  GradedOperator rescaled_generators(double factor) const;

  /// Sum of the l1 operator norms of all blocks.
  double norm1() const;

  GradedOperator& operator+=(const GradedOperator& rhs);
  GradedOperator& operator-=(const GradedOperator& rhs);
  GradedOperator& operator*=(cplx s);

  friend GradedOperator operator+(GradedOperator a, const GradedOperator& b) { return a += b; }
  friend GradedOperator operator-(GradedOperator a, const GradedOperator& b) { return a -= b; }
  friend GradedOperator operator*(GradedOperator a, cplx s) { return a *= s; }
  friend GradedOperator operator*(cplx s, GradedOperator a) { return a *= s; }

 private:
  SuperDims dims_;
  std::map<Monomial, Matrix> blocks_;
};

GradedOperator graded_mul(const GradedOperator& x, const GradedOperator& y);
inline GradedOperator operator*(const GradedOperator& x, const GradedOperator& y) { return graded_mul(x, y); }

enum class ExpMethod {
  /// Eigen-decomposition of the degree-0 block, then exact build-up in
  /// Grassmann degree through divided differences of exp.
  spectral,
  /// Taylor series of X / 2^s in the truncated ring followed by s squarings.
  scaling_squaring,
};

struct ExpOptions {
  ExpMethod method = ExpMethod::spectral;
  int max_squarings = 64;
  int max_taylor_terms = 60;
  /// Reciprocal condition number below which the eigenbasis is rejected.
  double min_eigvec_rcond = 1e-12;
};

class ExpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

GradedOperator graded_exp(const GradedOperator& x, const ExpOptions& options = {});

/// Str(Y) = Tr Y|even - Tr Y|odd, applied per monomial.
GrassmannPoly2 supertrace(const GradedOperator& x);
/// Str(N Y) with N the projection onto the odd (Omega^1) summand, i.e. minus
/// the trace of the odd-odd sub-block.
GrassmannPoly2 supertrace_N(const GradedOperator& x);

/// Divided differences of exp.  Exposed for tests.
cplx exp_divided_difference(cplx x, cplx y);
cplx exp_divided_difference(cplx x, cplx y, cplx z);

}  // namespace circle_torsion::grassmann
