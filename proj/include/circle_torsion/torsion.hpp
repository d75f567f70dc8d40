#pragma once

// Theta sums, the t-integrands of the degree-0 and degree-2 torsion forms,
// their integrals over t in (0, inf), and the closed-form targets.
//
// Conventions shared with the spectral module:
//   S(a, t)     = sum_k (k + a) e^{-4 pi^2 (k + a)^2 t}
//   theta(a, t) = sum_k e^{-4 pi^2 (k + a)^2 t}
//   Str N [e^{t D^2}]_2 on span{h_alpha, h_-alpha} = -(4 t / alpha) S(a, t) E^alpha E^-alpha
//
// Integrands are returned with respect to dt (the dt/t measure is folded in).
//
//   T_0        =  int (1 + 2 t d/dt) theta dt / t
//   t_alpha    = -(1 / 2 pi i) int t2_integrand dt
//   Cl(a)      =  sum_{m >= 1} sin(2 pi a m) / m^2

#include <complex>
#include <map>
#include <stdexcept>

#include "circle_torsion/spectral.hpp"

namespace circle_torsion::torsion {

using cplx = std::complex<double>;
using spectral::HolonomyParameter;

struct Constants {
  static constexpr double gamma54 = 0.90640247705547707798267128896691800074882;
  static constexpr double catalan = 0.91596559417721901505460351493238411077415;
  static constexpr double pi = 3.14159265358979323846264338327950288;
};

/// Measured C_conv is expected to be 6 sqrt(2 pi) / Gamma(5/4); see README.
double expected_conversion_constant();

struct QuadratureSpec {
  /// Crossover between the k-space and the Poisson-dual representation.
  double t_star = 1.0 / (2.0 * Constants::pi);
  /// Trapezoid nodes per unit of u = log t.
  int nodes_per_unit = 16;
  /// Target relative tolerance, certified by halving the node count.
  double rel_tol = 1e-10;
  /// Absolute floor for the certificate, used when the value itself vanishes.
  double abs_tol = 1e-13;
  /// k-sum truncation |k| <= modes and m-sum truncation 1 <= m <= dual_terms.
  int modes = 64;
  int dual_terms = 64;
  /// Integrand tail level that fixes [t_min, t_max].
  double tail_level = 1e-30;
};

struct QuadratureCertificate {
  double t_min = 0.0;
  double t_max = 0.0;
  int nodes = 0;
  /// |I_h - I_2h|; a conservative bound for the error of I_h.
  double error_estimate = 0.0;
  /// Disagreement of the two integrand branches at t_star.
  double branch_gap = 0.0;
  /// Largest dropped term of the k-sum (at t_star) and of the m-sum (at t_star).
  double truncation_bound = 0.0;
};

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// -- theta sums ---------------------------------------------------------------

double theta_sum(double a, double t, int modes);
double theta_sum_dual(double a, double t, int dual_terms);

double heat_trace_direct(double a, double t, int modes);
double heat_trace_dual(double a, double t, int dual_terms);
/// Direct sum for t >= t_star, dual form below.
double heat_trace_plain(double a, double t, const QuadratureSpec& quad = {});

// -- degree 0 -----------------------------------------------------------------

enum class Branch { automatic, direct, dual };

/// (1 + 2 t d/dt) theta(a, t) / t.
double t0_integrand(double a, double t, const QuadratureSpec& quad = {}, Branch branch = Branch::automatic);

/// Coefficient that (1 + 2 t d/dt) puts on the m-th dual term t^{-1/2} e^{-m^2/4t},
/// i.e. the Gaussian factor removed.  For m = 0 this is exactly zero.
double dual_term_weight(int m, double t);

struct TorsionValue {
  double value = 0.0;
  QuadratureCertificate certificate;
};

TorsionValue t0_numeric(HolonomyParameter a, const QuadratureSpec& quad = {});

/// -log(4 sin^2(pi a)), the zeta-regularized value.
double t0_reference(double a);

// -- Clausen ------------------------------------------------------------------

enum class ClausenMethod {
  /// theta - theta log|theta| + sum zeta(2k) theta^{2k+1} / ((2 pi)^{2k} k (2k+1)).
  accelerated,
  /// Compensated partial sums with an Abel-summation tail bound.
  direct,
};

class ClausenError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ClausenOptions {
  ClausenMethod method = ClausenMethod::accelerated;
  double tol = 1e-13;
  long long max_terms = 100'000'000;
};

/// Cl(a) for a in [0, 1].
double clausen(double a, const ClausenOptions& options = {});

// -- degree 2 -----------------------------------------------------------------

/// Coefficient of E^alpha E^-alpha in t^{-1} Psi_t^* (1 + 2 t d/dt) Str N [e^{t D^2}]_2.
double t2_integrand(double a, int alpha, double t, const QuadratureSpec& quad = {},
                    Branch branch = Branch::automatic);

struct TorsionCoefficient {
  cplx value;
  QuadratureCertificate certificate;
};

TorsionCoefficient t2_numeric(HolonomyParameter a, int alpha, const QuadratureSpec& quad = {});

/// (1 / (sqrt(2) pi^{5/2} i)) Gamma(5/4) Cl(a) / alpha.
cplx t2_closed(double a, int alpha);

// -- Gaussian moment ----------------------------------------------------------

/// Trapezoid in u = log z for int_0^inf z^{3/2} e^{-z^2/4} dz.
double gaussian_moment(double step);
/// Same integral after v = z^2 / 4: 2^{3/2} int_0^inf v^{1/4} e^{-v} dv.
double gaussian_moment_substituted(double step);

struct GaussianMomentReport {
  double ratio = 0.0;              // gaussian_moment / (2^{3/2} Gamma(5/4)) at the fine step
  double substitution_ratio = 0.0;
  double coarse_error = 0.0;       // |ratio - 1| at step 1/2
  double fine_error = 0.0;         // |ratio - 1| at step 1/4
  /// log(fine_error) / log(coarse_error); about 2 when halving the step squares the error.
  double order_exponent = 0.0;
};

GaussianMomentReport gaussian_moment_check();

// -- the two-form -------------------------------------------------------------

enum class Provenance { numeric, closed_form };

/// T_2 at the base metric as coefficients t_alpha of E^alpha E^-alpha, alpha >= 1.
struct TorsionTwoForm {
  HolonomyParameter a;
  std::map<int, cplx> coeff;
  Provenance provenance = Provenance::numeric;

  int max_alpha() const { return coeff.empty() ? 0 : coeff.rbegin()->first; }

  /// T(h ^ h') = sum_alpha t_alpha (h[alpha] h'[-alpha] - h'[alpha] h[-alpha]).
  /// Throws std::out_of_range if h or h' has Fourier support beyond max_alpha().
  cplx evaluate(const std::map<int, cplx>& h, const std::map<int, cplx>& hp) const;
};

TorsionTwoForm torsion_two_form(HolonomyParameter a, int max_alpha, Provenance provenance,
                                const QuadratureSpec& quad = {});

}  // namespace circle_torsion::torsion
