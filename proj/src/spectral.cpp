#include "circle_torsion/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "circle_torsion/numerics.hpp"

namespace circle_torsion::spectral {

using grassmann::GradedOperator;
using grassmann::GrassmannPoly2;
using grassmann::Matrix;
using grassmann::Monomial;
using numerics::kPi;

namespace {
constexpr cplx kI{0.0, 1.0};
constexpr double kTruncationWarning = 1e-12;
}  // namespace

HolonomyParameter::HolonomyParameter(double a) : a_(a) {
  if (!(a > 0.0 && a < 1.0)) {
    throw std::invalid_argument("holonomy parameter must satisfy 0 < a < 1, got " + std::to_string(a));
  }
}

ModeSpace::ModeSpace(HolonomyParameter a, int radius) : a_(a), radius_(radius) {
  if (radius < 0) throw std::invalid_argument("mode truncation radius must be nonnegative");
}

double ModeSpace::laplace_eigenvalue(int k) const {
  const double w = wavenumber(k);
  return 4.0 * kPi * kPi * w * w;
}

Eigen::MatrixXcd ShiftOperator::dense() const {
  const Eigen::Index n = 2 * radius + 1;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index src = 0; src < n; ++src) {
    const Eigen::Index dst = src + shift;
    if (dst >= 0 && dst < n) out(dst, src) = weights(src);
  }
  return out;
}

Eigen::VectorXd heat_diag(const ModeSpace& m, double tau) {
  if (tau < 0.0) throw std::invalid_argument("heat_diag: tau must be nonnegative");
  Eigen::VectorXd d(m.dim());
  for (Eigen::Index i = 0; i < m.dim(); ++i) d(i) = std::exp(-m.laplace_eigenvalue(m.mode(i)) * tau);
  return d;
}

ShiftOperator derivative(const ModeSpace& m) {
  ShiftOperator op{m.radius(), 0, Eigen::VectorXcd(m.dim())};
  for (Eigen::Index i = 0; i < m.dim(); ++i) op.weights(i) = 2.0 * kPi * kI * m.wavenumber(m.mode(i));
  return op;
}

ShiftOperator multiplication(const ModeSpace& m, int alpha) {
  return {m.radius(), alpha, Eigen::VectorXcd::Ones(m.dim())};
}

ShiftOperator scalar_r(const ModeSpace& m, int alpha) {
  ShiftOperator op{m.radius(), alpha, Eigen::VectorXcd::Zero(m.dim())};
  for (Eigen::Index i = 0; i < m.dim(); ++i) {
    const int k = m.mode(i);
    if (m.contains(k + alpha)) op.weights(i) = 2.0 * kPi * kI * (2.0 * m.wavenumber(k) + alpha);
  }
  return op;
}

cplx chain_trace(const ModeSpace& m, int alpha, int beta, double t, double s0, double s1, double s2) {
  if (alpha + beta != 0) return {};  // every diagonal entry of a net shift vanishes
  const ShiftOperator pa = scalar_r(m, alpha);
  const ShiftOperator pb = scalar_r(m, beta);
  numerics::CompensatedSum<cplx> sum;
  for (int k : numerics::modes_by_magnitude(m.radius())) {
    const int mid = k + beta;
    if (!m.contains(mid)) continue;
    cplx amp = std::exp(-m.laplace_eigenvalue(k) * t * s2);
    amp *= pb.weights(m.index(k));
    amp *= std::exp(-m.laplace_eigenvalue(mid) * t * s1);
    amp *= pa.weights(m.index(mid));
    amp *= std::exp(-m.laplace_eigenvalue(k) * t * s0);
    sum.add(amp);
  }
  return sum.value();
}

cplx duhamel_inner_trace(const ModeSpace& m, int alpha, int beta, double t, int nquad, SimplexRule rule) {
  if (nquad < 2) throw std::invalid_argument("duhamel_inner_trace: nquad too small");
  const auto outer = numerics::graded_unit_interval(nquad);
  numerics::CompensatedSum<cplx> sum;
  if (rule == SimplexRule::automatic && alpha + beta == 0) {
    // Only sigma_0 + sigma_2 = 1 - sigma_1 enters; the sigma_2 fibre has length 1 - sigma_1.
    for (std::size_t i = 0; i < outer.nodes.size(); ++i) {
      const double s1 = outer.nodes[i];
      sum.add(outer.weights[i] * (1.0 - s1) * chain_trace(m, alpha, beta, t, 1.0 - s1, s1, 0.0));
    }
    return sum.value();
  }
  for (std::size_t i = 0; i < outer.nodes.size(); ++i) {
    const double s1 = outer.nodes[i];
    const auto inner = numerics::gauss_legendre(nquad, 0.0, 1.0 - s1);
    for (std::size_t j = 0; j < inner.nodes.size(); ++j) {
      const double s2 = inner.nodes[j];
      sum.add(outer.weights[i] * inner.weights[j] * chain_trace(m, alpha, beta, t, 1.0 - s1 - s2, s1, s2));
    }
  }
  return sum.value();
}

OracleResult duhamel_deg2_oracle(const ModeSpace& m, int alpha, int beta, double t, int nquad,
                                 SimplexRule rule) {
  if (alpha == 0 || beta == 0) throw std::invalid_argument("duhamel_deg2_oracle: directions must be nonzero");
  if (!(t > 0.0)) throw std::invalid_argument("duhamel_deg2_oracle: t must be positive");
  OracleResult out;
  if (alpha != beta) {
    // [e^{tD^2}]_2 = t^2 E^a E^b (chain), Str N picks -Tr on Omega^1; E^b E^a = -E^a E^b.
    const cplx forward = duhamel_inner_trace(m, alpha, beta, t, nquad, rule);
    const cplx backward = duhamel_inner_trace(m, beta, alpha, t, nquad, rule);
    out.value = -t * t * (forward - backward);
  }
  const int reach = std::abs(alpha) + std::abs(beta);
  for (int k = -m.radius(); k <= m.radius(); ++k) {
    if (std::abs(k) > m.radius() - reach) {
      out.boundary_weight = std::max(out.boundary_weight, std::exp(-m.laplace_eigenvalue(k) * t));
    }
  }
  out.truncation_warning = out.boundary_weight > kTruncationWarning;
  return out;
}

cplx trace_closed_form(const ModeSpace& m, int alpha, double t) {
  if (alpha == 0) throw std::invalid_argument("trace_closed_form: alpha must be nonzero");
  if (!(t > 0.0)) throw std::invalid_argument("trace_closed_form: t must be positive");
  numerics::CompensatedSum<double> sum;
  for (int k : numerics::modes_by_magnitude(m.radius())) {
    if (!m.contains(k - alpha)) continue;
    const double c = 2.0 * m.wavenumber(k) - alpha;
    const double lk = m.laplace_eigenvalue(k) * t;
    const double lka = m.laplace_eigenvalue(k - alpha) * t;
    const double b = lk - lka;  // = 4 pi^2 alpha c t
    // int_0^1 (1 - s) e^{-lk + b s} ds
    double weight;
    if (std::abs(b) < 0.5) {
      double term = 0.5, series = 0.5;
      for (int n = 1; n < 40; ++n) {
        term *= b / (n + 2);
        series += term;
        if (std::abs(term) < 1e-18 * std::abs(series)) break;
      }
      weight = std::exp(-lk) * series;
    } else {
      weight = (std::exp(-lka) - std::exp(-lk) * (1.0 + b)) / (b * b);
    }
    sum.add(-4.0 * kPi * kPi * c * c * weight);
  }
  return sum.value();
}

// ---------------------------------------------------------------------------

grassmann::SuperDims super_dims(const ModeSpace& m) { return {m.dim(), m.dim()}; }

GradedOperator dirac_operator(const ModeSpace& m, std::span<const int> directions) {
  const auto dims = super_dims(m);
  const Eigen::Index n = m.dim();
  const Matrix d = derivative(m).dense();

  Matrix chat_d = Matrix::Zero(2 * n, 2 * n);
  chat_d.topRightCorner(n, n) = d;
  chat_d.bottomLeftCorner(n, n) = d;
  GradedOperator out = GradedOperator::from_matrix(dims, -chat_d);

  for (int alpha : directions) {
    const Matrix h = multiplication(m, alpha).dense();
    Matrix hz = Matrix::Zero(2 * n, 2 * n);
    hz.topLeftCorner(n, n) = h;
    hz.bottomRightCorner(n, n) = -h;
    out.add_block(Monomial::generator(alpha), -hz);
  }
  return out;
}

namespace {
void check_direction(int alpha, double t) {
  if (alpha < 1) throw std::invalid_argument("direction alpha must be >= 1");
  if (!(t > 0.0)) throw std::invalid_argument("t must be positive");
}
}  // namespace

GrassmannPoly2 heat_supertrace(const ModeSpace& m, int alpha, double t, const grassmann::ExpOptions& options) {
  check_direction(alpha, t);
  const int dirs[] = {alpha, -alpha};
  const GradedOperator d = dirac_operator(m, dirs);
  const GradedOperator d2 = graded_mul(d, d);
  return grassmann::supertrace_N(grassmann::graded_exp(d2 * cplx(t), options));
}

GrassmannPoly2 supertrace_pipeline(const ModeSpace& m, int alpha, double t, const grassmann::ExpOptions& options) {
  check_direction(alpha, t);
  const int dirs[] = {alpha, -alpha};
  const double root = std::sqrt(t);
  const GradedOperator dt = (dirac_operator(m, dirs) * cplx(root)).rescaled_generators(1.0 / root);
  const GradedOperator dt2 = graded_mul(dt, dt);
  const GradedOperator heat = grassmann::graded_exp(dt2, options);
  const GradedOperator weight = GradedOperator::identity(super_dims(m)) + dt2 * cplx(2.0);
  return grassmann::supertrace_N(graded_mul(weight, heat));
}

}  // namespace circle_torsion::spectral
