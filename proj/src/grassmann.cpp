#include "circle_torsion/grassmann.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SparseCore>

namespace circle_torsion::grassmann {

// ---------------------------------------------------------------------------
// Monomials and the truncated Grassmann algebra

Monomial Monomial::generator(int alpha) {
  Monomial m;
  m.degree_ = 1;
  m.gens_ = {alpha, 0};
  return m;
}

Monomial Monomial::pair(int alpha, int beta) {
  if (alpha == beta) throw std::invalid_argument("Monomial::pair: repeated generator");
  Monomial m;
  m.degree_ = 2;
  m.gens_ = {std::min(alpha, beta), std::max(alpha, beta)};
  return m;
}

std::string Monomial::to_string() const {
  if (degree_ == 0) return "1";
  std::ostringstream os;
  for (int i = 0; i < degree_; ++i) os << "E^" << gens_[i];
  return os.str();
}

SignedMonomial ordered_pair(int alpha, int beta) {
  if (alpha == beta) return {};
  return {alpha < beta ? 1 : -1, Monomial::pair(alpha, beta)};
}

SignedMonomial multiply(const Monomial& lhs, const Monomial& rhs) {
  if (lhs.degree() + rhs.degree() > 2) return {};
  if (lhs.degree() == 0) return {1, rhs};
  if (rhs.degree() == 0) return {1, lhs};
  return ordered_pair(lhs.generators()[0], rhs.generators()[0]);
}

GrassmannPoly2::GrassmannPoly2(cplx scalar) { add(Monomial::unit(), scalar); }

GrassmannPoly2 GrassmannPoly2::generator(int alpha, cplx coefficient) {
  GrassmannPoly2 p;
  p.add(Monomial::generator(alpha), coefficient);
  return p;
}

GrassmannPoly2 GrassmannPoly2::ordered(int alpha, int beta, cplx coefficient) {
  GrassmannPoly2 p;
  const auto sm = ordered_pair(alpha, beta);
  if (sm.sign != 0) p.add(sm.monomial, static_cast<double>(sm.sign) * coefficient);
  return p;
}

cplx GrassmannPoly2::coeff(const Monomial& m) const {
  const auto it = terms_.find(m);
  return it == terms_.end() ? cplx{} : it->second;
}

cplx GrassmannPoly2::coeff(int alpha, int beta) const {
  const auto sm = ordered_pair(alpha, beta);
  if (sm.sign == 0) return {};
  return static_cast<double>(sm.sign) * coeff(sm.monomial);
}

void GrassmannPoly2::add(const Monomial& m, cplx value) {
  if (value == cplx{}) return;
  const auto [it, inserted] = terms_.try_emplace(m, value);
  if (inserted) return;
  it->second += value;
  if (it->second == cplx{}) terms_.erase(it);
}

GrassmannPoly2 GrassmannPoly2::rescaled(double factor) const {
  GrassmannPoly2 out;
  for (const auto& [m, c] : terms_) out.add(m, c * std::pow(factor, m.degree()));
  return out;
}

GrassmannPoly2& GrassmannPoly2::operator+=(const GrassmannPoly2& rhs) {
  for (const auto& [m, c] : rhs.terms_) add(m, c);
  return *this;
}

GrassmannPoly2& GrassmannPoly2::operator-=(const GrassmannPoly2& rhs) {
  for (const auto& [m, c] : rhs.terms_) add(m, -c);
  return *this;
}

GrassmannPoly2& GrassmannPoly2::operator*=(cplx s) {
  for (auto& [m, c] : terms_) c *= s;
  return *this;
}

GrassmannPoly2 gr_mul(const GrassmannPoly2& x, const GrassmannPoly2& y) {
  GrassmannPoly2 out;
  for (const auto& [mx, cx] : x.terms()) {
    for (const auto& [my, cy] : y.terms()) {
      const auto sm = multiply(mx, my);
      if (sm.sign != 0) out.add(sm.monomial, static_cast<double>(sm.sign) * cx * cy);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parity bookkeeping

Matrix parity_conjugate(const Matrix& a, SuperDims dims) {
  Matrix out = a;
  out.topRightCorner(dims.even, dims.odd) *= -1.0;
  out.bottomLeftCorner(dims.odd, dims.even) *= -1.0;
  return out;
}

Matrix even_part(const Matrix& a, SuperDims dims) {
  Matrix out = a;
  out.topRightCorner(dims.even, dims.odd).setZero();
  out.bottomLeftCorner(dims.odd, dims.even).setZero();
  return out;
}

Matrix odd_part(const Matrix& a, SuperDims dims) {
  Matrix out = a;
  out.topLeftCorner(dims.even, dims.even).setZero();
  out.bottomRightCorner(dims.odd, dims.odd).setZero();
  return out;
}

namespace {

// z M: negates the odd rows.
Matrix z_left(Matrix m, SuperDims dims) {
  m.bottomRows(dims.odd) *= -1.0;
  return m;
}

void check_block(const Matrix& m, SuperDims dims) {
  if (m.rows() != dims.total() || m.cols() != dims.total()) {
    throw DimensionError("graded operator block has shape " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + ", expected " + std::to_string(dims.total()));
  }
}

}  // namespace

GradedOperator::GradedOperator(SuperDims dims) : dims_(dims) {}

GradedOperator GradedOperator::identity(SuperDims dims) {
  return from_matrix(dims, Matrix::Identity(dims.total(), dims.total()));
}

GradedOperator GradedOperator::from_matrix(SuperDims dims, const Matrix& deg0) {
  GradedOperator g(dims);
  g.add_block(Monomial::unit(), deg0);
  return g;
}

void GradedOperator::add_block(const Monomial& monomial, const Matrix& m) {
  check_block(m, dims_);
  auto [it, inserted] = blocks_.try_emplace(monomial, m);
  if (!inserted) it->second += m;
}

Matrix GradedOperator::block(const Monomial& monomial) const {
  const auto it = blocks_.find(monomial);
  if (it == blocks_.end()) return Matrix::Zero(dims_.total(), dims_.total());
  return it->second;
}

Matrix GradedOperator::ordered_block(int alpha, int beta) const {
  const auto sm = ordered_pair(alpha, beta);
  if (sm.sign == 0) return Matrix::Zero(dims_.total(), dims_.total());
  return static_cast<double>(sm.sign) * block(sm.monomial);
}

GradedOperator GradedOperator::rescaled_generators(double factor) const {
  GradedOperator out(dims_);
  for (const auto& [m, b] : blocks_) out.add_block(m, b * std::pow(factor, m.degree()));
  return out;
}

double GradedOperator::norm1() const {
  double s = 0.0;
  for (const auto& [m, b] : blocks_) s += b.cwiseAbs().colwise().sum().maxCoeff();
  return s;
}

GradedOperator& GradedOperator::operator+=(const GradedOperator& rhs) {
  if (!(rhs.dims_ == dims_)) throw DimensionError("graded operator dimension mismatch");
  for (const auto& [m, b] : rhs.blocks_) add_block(m, b);
  return *this;
}

GradedOperator& GradedOperator::operator-=(const GradedOperator& rhs) {
  if (!(rhs.dims_ == dims_)) throw DimensionError("graded operator dimension mismatch");
  for (const auto& [m, b] : rhs.blocks_) add_block(m, -b);
  return *this;
}

GradedOperator& GradedOperator::operator*=(cplx s) {
  for (auto& [m, b] : blocks_) b *= s;
  return *this;
}

GradedOperator graded_mul(const GradedOperator& x, const GradedOperator& y) {
  if (!(x.dims() == y.dims())) throw DimensionError("graded_mul: dimension mismatch");
  const SuperDims dims = x.dims();
  GradedOperator out(dims);
  for (const auto& [mx, a] : x.blocks()) {
    for (const auto& [my, b] : y.blocks()) {
      const auto sm = multiply(mx, my);
      if (sm.sign == 0) continue;
      // Moving the odd monomial my to the left of a conjugates a by z.
      Matrix prod = (my.parity() == 1 ? parity_conjugate(a, dims) : a) * b;
      if (sm.sign < 0) prod = -prod;
      out.add_block(sm.monomial, prod);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Divided differences of exp

namespace {

constexpr double kClusterRadius = 1.0;

// (e^d - 1) / d
cplx expm1_ratio(cplx d) {
  if (std::abs(d) < 0.5) {
    cplx term = 1.0;
    cplx sum = 1.0;
    for (int n = 2; n < 40; ++n) {
      term *= d / static_cast<double>(n);
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  return (std::exp(d) - 1.0) / d;
}

// e[x,y,z] for three nearby points: e^c sum_n h_n(x-c, y-c, z-c) / (n+2)!
cplx exp_dd2_cluster(cplx x, cplx y, cplx z) {
  const cplx c = (x + y + z) / 3.0;
  const cplx dx = x - c, dy = y - c, dz = z - c;
  // h_n in one, two and three variables via h^(k)_n = v_k h^(k)_{n-1} + h^(k-1)_n
  // h_1 = dx + dy + dz vanishes here, so stop on the bound
  // |h_n| <= C(n+2, 2) r^n rather than on the size of a term.
  const double r = std::max({std::abs(dx), std::abs(dy), std::abs(dz)});
  cplx h1 = 1.0, h2 = 1.0, h3 = 1.0;
  double fact = 2.0;  // (n+2)!
  double rn = 1.0;
  cplx sum = h3 / fact;
  for (int n = 1; n < 80; ++n) {
    h1 = dz * h1;
    h2 = dy * h2 + h1;
    h3 = dx * h3 + h2;
    fact *= static_cast<double>(n + 2);
    rn *= r;
    sum += h3 / fact;
    if (0.5 * (n + 2) * (n + 1) * rn / fact < 1e-18 * std::abs(sum)) break;
  }
  return std::exp(c) * sum;
}

// e[x,y,z] given the first divided differences of the three pairs.
cplx exp_dd2_from_pairs(cplx x, cplx y, cplx z, cplx fxy, cplx fyz, cplx fxz) {
  const double sxy = std::abs(x - y);
  const double syz = std::abs(y - z);
  const double sxz = std::abs(x - z);
  const double smax = std::max({sxy, syz, sxz});
  if (smax < kClusterRadius) return exp_dd2_cluster(x, y, z);
  if (smax == sxz) return (fxy - fyz) / (x - z);
  if (smax == sxy) return (fxz - fyz) / (x - y);
  return (fxy - fxz) / (y - z);
}

}  // namespace

cplx exp_divided_difference(cplx x, cplx y) {
  if (x == y) return std::exp(x);
  const bool x_dominant = x.real() >= y.real();
  const cplx p = x_dominant ? x : y;
  const cplx q = x_dominant ? y : x;
  return std::exp(p) * expm1_ratio(q - p);
}

cplx exp_divided_difference(cplx x, cplx y, cplx z) {
  return exp_dd2_from_pairs(x, y, z, exp_divided_difference(x, y), exp_divided_difference(y, z),
                            exp_divided_difference(x, z));
}

// ---------------------------------------------------------------------------
// Graded exponential

namespace {

using SparseRow = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

GradedOperator exp_spectral(const GradedOperator& x, const ExpOptions& options) {
  const SuperDims dims = x.dims();
  const Eigen::Index n = dims.total();
  const Matrix a = x.block(Monomial::unit());

  const bool diagonal = (a - Matrix(a.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0;
  Eigen::VectorXcd lambda;
  Matrix basis, basis_inv;
  if (diagonal) {
    lambda = a.diagonal();
  } else {
    Eigen::ComplexEigenSolver<Matrix> solver(a);
    if (solver.info() != Eigen::Success) throw ExpError("graded_exp: eigen-decomposition failed");
    lambda = solver.eigenvalues();
    basis = solver.eigenvectors();
    Eigen::PartialPivLU<Matrix> lu(basis);
    if (lu.rcond() < options.min_eigvec_rcond) {
      throw ExpError("graded_exp: degree-0 block is too far from normal for the spectral path");
    }
    basis_inv = lu.inverse();
  }
  const auto to_eigenbasis = [&](const Matrix& m) -> Matrix {
    return diagonal ? m : Matrix(basis_inv * m * basis);
  };
  const auto from_eigenbasis = [&](const Matrix& m) -> Matrix {
    return diagonal ? m : Matrix(basis * m * basis_inv);
  };

  Matrix phi1(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) phi1(i, j) = exp_divided_difference(lambda(i), lambda(j));

  GradedOperator out(dims);
  out.add_block(Monomial::unit(), from_eigenbasis(Matrix(phi1.diagonal().asDiagonal())));

  // Degree-1 blocks in the eigenbasis of the degree-0 block, pre-multiplied by z.
  std::vector<std::pair<int, Matrix>> first;
  for (const auto& [m, b] : x.blocks()) {
    if (m.degree() != 1) continue;
    Matrix bh = to_eigenbasis(z_left(b, dims));
    out.add_block(m, z_left(from_eigenbasis(bh.cwiseProduct(phi1)), dims));
    first.emplace_back(m.generators()[0], std::move(bh));
  }
  for (const auto& [m, b] : x.blocks()) {
    if (m.degree() != 2) continue;
    out.add_block(m, from_eigenbasis(to_eigenbasis(b).cwiseProduct(phi1)));
  }

  // Second-order Duhamel term, integrated over the simplex exactly.
  std::vector<SparseRow> sparse;
  sparse.reserve(first.size());
  for (const auto& [g, bh] : first) sparse.push_back(bh.sparseView(cplx{}, 0.0));

  for (std::size_t p = 0; p < first.size(); ++p) {
    for (std::size_t q = 0; q < first.size(); ++q) {
      const auto sm = ordered_pair(first[p].first, first[q].first);
      if (sm.sign == 0) continue;
      const SparseRow& lhs = sparse[p];
      const SparseRow& rhs = sparse[q];
      Matrix acc = Matrix::Zero(n, n);
      for (Eigen::Index i = 0; i < n; ++i) {
        for (SparseRow::InnerIterator it(lhs, i); it; ++it) {
          const Eigen::Index l = it.col();
          for (SparseRow::InnerIterator jt(rhs, l); jt; ++jt) {
            const Eigen::Index j = jt.col();
            acc(i, j) += it.value() * jt.value() *
                         exp_dd2_from_pairs(lambda(i), lambda(l), lambda(j), phi1(i, l), phi1(l, j),
                                            phi1(i, j));
          }
        }
      }
      out.add_block(sm.monomial, static_cast<double>(sm.sign) * from_eigenbasis(acc));
    }
  }
  return out;
}

GradedOperator exp_scaling_squaring(const GradedOperator& x, const ExpOptions& options) {
  const SuperDims dims = x.dims();
  const double norm = x.norm1();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  if (squarings > options.max_squarings) {
    throw ExpError("graded_exp: scaling and squaring depth exhausted (need " +
                   std::to_string(squarings) + " squarings)");
  }
  const GradedOperator scaled = x * cplx(std::ldexp(1.0, -squarings));

  GradedOperator result = GradedOperator::identity(dims);
  GradedOperator term = GradedOperator::identity(dims);
  bool converged = false;
  for (int k = 1; k <= options.max_taylor_terms; ++k) {
    term = graded_mul(term, scaled) * cplx(1.0 / k);
    result += term;
    if (term.norm1() <= 1e-18 * result.norm1()) {
      converged = true;
      break;
    }
  }
  if (!converged) throw ExpError("graded_exp: Taylor series did not converge");
  for (int s = 0; s < squarings; ++s) result = graded_mul(result, result);
  return result;
}

}  // namespace

GradedOperator graded_exp(const GradedOperator& x, const ExpOptions& options) {
  switch (options.method) {
    case ExpMethod::spectral:
      return exp_spectral(x, options);
    case ExpMethod::scaling_squaring:
      return exp_scaling_squaring(x, options);
  }
  throw ExpError("graded_exp: unknown method");
}

// ---------------------------------------------------------------------------
// Supertraces

GrassmannPoly2 supertrace(const GradedOperator& x) {
  const SuperDims dims = x.dims();
  GrassmannPoly2 out;
  for (const auto& [m, b] : x.blocks()) {
    out.add(m, b.topLeftCorner(dims.even, dims.even).trace() -
                   b.bottomRightCorner(dims.odd, dims.odd).trace());
  }
  return out;
}

GrassmannPoly2 supertrace_N(const GradedOperator& x) {
  const SuperDims dims = x.dims();
  GrassmannPoly2 out;
  for (const auto& [m, b] : x.blocks()) out.add(m, -b.bottomRightCorner(dims.odd, dims.odd).trace());
  return out;
}

}  // namespace circle_torsion::grassmann
