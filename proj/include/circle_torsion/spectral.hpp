#pragma once

// Fourier model of the twisted function space
//
//   H = { f : f(x + 1) = e^{2 pi i a} f(x) },   basis f_k(x) = e^{2 pi i (k + a) x},
//
// truncated to |k| <= K, together with the operators the torsion integrand is
// built from and two independent evaluations of the degree-2 heat supertrace:
// a Duhamel simplex quadrature and the graded exponential of D^2 on H (x) C^2.
//
// Ordering convention for the degree-2 part: a two-form on span{h_alpha,
// h_-alpha} is reported as the single coefficient of E^alpha E^-alpha with
// alpha >= 1, i.e. both orderings (alpha, -alpha) and (-alpha, alpha) of the
// Duhamel expansion are already combined.

#include <complex>
#include <span>

#include <Eigen/Dense>

#include "circle_torsion/grassmann.hpp"

namespace circle_torsion::spectral {

using cplx = std::complex<double>;

/// Holonomy exponent a of the flat line bundle; acyclic exactly for 0 < a < 1.
class HolonomyParameter {
 public:
  explicit HolonomyParameter(double a);
  double value() const { return a_; }

 private:
  double a_;
};

class ModeSpace {
 public:
  ModeSpace(HolonomyParameter a, int radius);

  double a() const { return a_.value(); }
  HolonomyParameter holonomy() const { return a_; }
  int radius() const { return radius_; }
  Eigen::Index dim() const { return 2 * radius_ + 1; }

  bool contains(int k) const { return k >= -radius_ && k <= radius_; }
  Eigen::Index index(int k) const { return k + radius_; }
  int mode(Eigen::Index i) const { return static_cast<int>(i) - radius_; }

  double wavenumber(int k) const { return k + a(); }
  /// Eigenvalue of -d^2/dx^2 on f_k: 4 pi^2 (k + a)^2.
  double laplace_eigenvalue(int k) const;

 private:
  HolonomyParameter a_;
  int radius_;
};

/// Banded operator f_k -> weights[index(k)] f_{k + shift}; targets outside the
/// truncation are dropped.
struct ShiftOperator {
  int radius = 0;
  int shift = 0;
  Eigen::VectorXcd weights;

  Eigen::MatrixXcd dense() const;
};

/// Diagonal of e^{tau d^2/dx^2}: entries e^{-4 pi^2 (k + a)^2 tau}.
Eigen::VectorXd heat_diag(const ModeSpace& m, double tau);

/// d/dx, diagonal with entries 2 pi i (k + a).
ShiftOperator derivative(const ModeSpace& m);
/// Multiplication by h_alpha(x) = e^{2 pi i alpha x}.
ShiftOperator multiplication(const ModeSpace& m, int alpha);
/// 2 h_alpha d/dx + (d/dx h_alpha): f_k -> 2 pi i (2 (k + a) + alpha) f_{k + alpha}.
ShiftOperator scalar_r(const ModeSpace& m, int alpha);

/// Trace of e^{t s0 d^2} P_alpha e^{t s1 d^2} P_beta e^{t s2 d^2} with P = scalar_r,
/// evaluated by following each basis vector through the truncated operators.
cplx chain_trace(const ModeSpace& m, int alpha, int beta, double t, double s0, double s1, double s2);

enum class SimplexRule {
  /// Reduce to one dimension when alpha + beta = 0 (the integrand then depends
  /// on sigma_1 only); otherwise use the general rule.
  automatic,
  /// Collapsed two-dimensional Gauss-Legendre rule over the whole simplex.
  general,
};

/// Tr of the simplex integral of the chain above (no t^2 prefactor).
cplx duhamel_inner_trace(const ModeSpace& m, int alpha, int beta, double t, int nquad = 16,
                         SimplexRule rule = SimplexRule::automatic);

struct OracleResult {
  /// Coefficient of E^alpha E^beta (in that order) in Str N [e^{tD^2}]_2 on
  /// V = span{h_alpha, h_beta}.
  cplx value;
  /// Largest heat weight e^{-t lambda_k} among modes touched by truncated shifts.
  double boundary_weight = 0.0;
  bool truncation_warning = false;
};

OracleResult duhamel_deg2_oracle(const ModeSpace& m, int alpha, int beta, double t, int nquad = 16,
                                 SimplexRule rule = SimplexRule::automatic);

/// duhamel_inner_trace(m, alpha, -alpha, t) with the simplex integral done
/// analytically per mode.
cplx trace_closed_form(const ModeSpace& m, int alpha, double t);

// ---------------------------------------------------------------------------
// Graded operators on H (x) C^2 (Omega^0 first, Omega^1 second).

grassmann::SuperDims super_dims(const ModeSpace& m);

/// D = -c_hat d/dx - sum_alpha h_alpha E^alpha z.
grassmann::GradedOperator dirac_operator(const ModeSpace& m, std::span<const int> directions);

/// Str N e^{t D^2} on V = span{h_alpha, h_-alpha}.
grassmann::GrassmannPoly2 heat_supertrace(const ModeSpace& m, int alpha, double t,
                                          const grassmann::ExpOptions& options = {});

/// Str N (1 + 2 D_t^2) e^{D_t^2} with D_t = Psi_t^* sqrt(t) D on V = span{h_alpha, h_-alpha}.
grassmann::GrassmannPoly2 supertrace_pipeline(const ModeSpace& m, int alpha, double t,
                                              const grassmann::ExpOptions& options = {});

}  // namespace circle_torsion::spectral
