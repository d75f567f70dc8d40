#include "circle_torsion/torsion.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "circle_torsion/numerics.hpp"

namespace circle_torsion::torsion {

using numerics::CompensatedSum;
using numerics::kPi;

namespace {

constexpr double kFourPiSq = 4.0 * kPi * kPi;

void require_positive_t(double t) {
  if (!(t > 0.0)) throw std::invalid_argument("t must be positive");
}

void require_alpha(int alpha) {
  if (alpha == 0) throw std::invalid_argument("alpha must be nonzero");
}

double lambda(double a, int k) {
  const double w = k + a;
  return kFourPiSq * w * w;
}

// Sum of f(k) over |k| <= modes in ascending |k|.
template <typename F>
double k_sum(int modes, F&& f) {
  CompensatedSum<double> s;
  for (int k : numerics::modes_by_magnitude(modes)) s.add(f(k));
  return s.value();
}

template <typename F>
double m_sum(int dual_terms, F&& f) {
  CompensatedSum<double> s;
  for (int m = 1; m <= dual_terms; ++m) s.add(f(m));
  return s.value();
}

bool use_direct(double t, const QuadratureSpec& quad, Branch branch) {
  if (branch == Branch::direct) return true;
  if (branch == Branch::dual) return false;
  return t >= quad.t_star;
}

void check_spec(const QuadratureSpec& quad) {
  if (!(quad.t_star > 0.0)) throw std::invalid_argument("QuadratureSpec: t_star must be positive");
  if (quad.nodes_per_unit < 2) throw std::invalid_argument("QuadratureSpec: nodes_per_unit must be >= 2");
  if (!(quad.rel_tol > 0.0)) throw std::invalid_argument("QuadratureSpec: rel_tol must be positive");
  if (quad.modes < 1 || quad.dual_terms < 1) throw std::invalid_argument("QuadratureSpec: truncations must be >= 1");
}

// Integration window from the integrand tails, measured in the u = log t variable:
//   near 0:   t^{-5/2} e^{-1/(4t)}    (leading dual term times dt/du = t)
//   near inf: e^{-l t} (3 + 2 l t)     (lowest k-mode, l = 4 pi^2 min(a, 1-a)^2)
std::pair<double, double> integration_window(double a, const QuadratureSpec& quad) {
  double t_min = quad.t_star;
  while (std::pow(t_min, -2.5) * std::exp(-0.25 / t_min) > quad.tail_level) t_min /= 1.125;
  const double d = std::min(a, 1.0 - a);
  const double l = kFourPiSq * d * d;
  double t_max = quad.t_star;
  while (std::exp(-l * t_max) * (3.0 + 2.0 * l * t_max) > quad.tail_level) t_max *= 1.125;
  return {t_min, t_max};
}

struct Integral {
  double value;
  QuadratureCertificate certificate;
};

// Trapezoid rule in u = log t on [log t_min, log t_max] with an even number of
// panels; the coarse estimate reuses every other node.
Integral integrate_log(const std::function<double(double)>& f, double a, const QuadratureSpec& quad) {
  const auto [t_min, t_max] = integration_window(a, quad);
  const double u0 = std::log(t_min), u1 = std::log(t_max);
  int panels = static_cast<int>(std::ceil((u1 - u0) * quad.nodes_per_unit));
  panels += panels % 2;
  const double h = (u1 - u0) / panels;

  CompensatedSum<double> fine, coarse;
  for (int i = 0; i <= panels; ++i) {
    const double t = std::exp(u0 + i * h);
    const double w = (i == 0 || i == panels) ? 0.5 : 1.0;
    const double v = f(t) * t;
    fine.add(w * v);
    if (i % 2 == 0) coarse.add(w * v);
  }
  Integral out;
  out.value = h * fine.value();
  const double coarse_value = 2.0 * h * coarse.value();
  out.certificate.t_min = t_min;
  out.certificate.t_max = t_max;
  out.certificate.nodes = panels + 1;
  out.certificate.error_estimate = std::abs(out.value - coarse_value);
  return out;
}

void certify(const Integral& r, const QuadratureSpec& quad, const char* what) {
  const double allowed = std::max(quad.rel_tol * std::abs(r.value), quad.abs_tol);
  if (!(r.certificate.error_estimate <= allowed)) {
    throw QuadratureError(std::string(what) + ": quadrature error estimate " +
                          std::to_string(r.certificate.error_estimate) + " exceeds tolerance " +
                          std::to_string(allowed));
  }
}

double relative_gap(double x, double y) {
  const double scale = std::max(std::abs(x), std::abs(y));
  return scale == 0.0 ? 0.0 : std::abs(x - y) / scale;
}

double truncation_bound(double a, const QuadratureSpec& quad) {
  // Largest omitted terms of either series on its own side of t_star.
  const int k = quad.modes + 1;
  const double lk = std::min(lambda(a, k), lambda(a, -k));
  const double k_term = (k + 1.0) * (1.0 / quad.t_star + lk) * std::exp(-lk * quad.t_star);
  const double m = quad.dual_terms + 1.0;
  const double m_term = m * m * m * std::pow(quad.t_star, -3.5) * std::exp(-m * m / (4.0 * quad.t_star));
  return std::max(k_term, m_term);
}

}  // namespace

double expected_conversion_constant() { return 6.0 * std::sqrt(2.0 * kPi) / Constants::gamma54; }

// ---------------------------------------------------------------------------
// theta sums

double theta_sum(double a, double t, int modes) {
  require_positive_t(t);
  return k_sum(modes, [&](int k) { return (k + a) * std::exp(-lambda(a, k) * t); });
}

double theta_sum_dual(double a, double t, int dual_terms) {
  require_positive_t(t);
  const double s = m_sum(dual_terms, [&](int m) {
    return m * std::exp(-static_cast<double>(m) * m / (4.0 * t)) * numerics::sin_turns(numerics::frac_product(a, m));
  });
  return s / (4.0 * std::pow(kPi, 1.5) * std::pow(t, 1.5));
}

double heat_trace_direct(double a, double t, int modes) {
  require_positive_t(t);
  return k_sum(modes, [&](int k) { return std::exp(-lambda(a, k) * t); });
}

double heat_trace_dual(double a, double t, int dual_terms) {
  require_positive_t(t);
  const double s = m_sum(dual_terms, [&](int m) {
    return std::exp(-static_cast<double>(m) * m / (4.0 * t)) * numerics::cos_turns(numerics::frac_product(a, m));
  });
  return (1.0 + 2.0 * s) / std::sqrt(4.0 * kPi * t);
}

double heat_trace_plain(double a, double t, const QuadratureSpec& quad) {
  return t >= quad.t_star ? heat_trace_direct(a, t, quad.modes) : heat_trace_dual(a, t, quad.dual_terms);
}

// ---------------------------------------------------------------------------
// degree 0

double dual_term_weight(int m, double t) {
  require_positive_t(t);
  // (1 + 2 t d/dt) t^p e^{-m^2/4t} = (1 + 2p + m^2 / (2t)) t^p e^{-m^2/4t} with p = -1/2
  constexpr double p = -0.5;
  const double polynomial = 1.0 + 2.0 * p;
  return m == 0 ? polynomial : polynomial + static_cast<double>(m) * m / (2.0 * t);
}

double t0_integrand(double a, double t, const QuadratureSpec& quad, Branch branch) {
  require_positive_t(t);
  if (use_direct(t, quad, branch)) {
    return k_sum(quad.modes, [&](int k) {
      const double l = lambda(a, k);
      return std::exp(-l * t) * (1.0 / t - 2.0 * l);
    });
  }
  const double zero_mode = dual_term_weight(0, t);
  const double s = m_sum(quad.dual_terms, [&](int m) {
    return dual_term_weight(m, t) * std::exp(-static_cast<double>(m) * m / (4.0 * t)) *
           numerics::cos_turns(numerics::frac_product(a, m));
  });
  return (zero_mode + 2.0 * s) / (std::sqrt(4.0 * kPi * t) * t);
}

TorsionValue t0_numeric(HolonomyParameter a, const QuadratureSpec& quad) {
  check_spec(quad);
  const double av = a.value();
  const Integral r = integrate_log([&](double t) { return t0_integrand(av, t, quad); }, av, quad);
  certify(r, quad, "t0_numeric");
  TorsionValue out{r.value, r.certificate};
  out.certificate.branch_gap = relative_gap(t0_integrand(av, quad.t_star, quad, Branch::direct),
                                            t0_integrand(av, quad.t_star, quad, Branch::dual));
  out.certificate.truncation_bound = truncation_bound(av, quad);
  return out;
}

double t0_reference(double a) {
  const double s = std::sin(kPi * a);
  return -std::log(4.0 * s * s);
}

// ---------------------------------------------------------------------------
// Clausen

namespace {

// zeta(s) for s >= 2 by Euler-Maclaurin with N = 64 and three correction terms.
double zeta(int s) {
  constexpr int n = 64;
  CompensatedSum<double> sum;
  for (int k = n - 1; k >= 1; --k) sum.add(std::pow(static_cast<double>(k), -s));
  const double nd = n;
  sum.add(std::pow(nd, 1.0 - s) / (s - 1.0));
  sum.add(0.5 * std::pow(nd, -s));
  const double b[] = {1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0};
  double rising = s;  // s (s+1) ... (s + 2j - 2)
  double fact = 2.0;  // (2j)!
  for (int j = 1; j <= 3; ++j) {
    sum.add(b[j - 1] / fact * rising * std::pow(nd, -s - 2 * j + 1));
    rising *= (s + 2.0 * j - 1.0) * (s + 2.0 * j);
    fact *= (2.0 * j + 1.0) * (2.0 * j + 2.0);
  }
  return sum.value();
}

const std::vector<double>& zeta_even_table() {
  static const std::vector<double> table = [] {
    std::vector<double> z(1, 0.0);
    for (int k = 1; k <= 64; ++k) z.push_back(zeta(2 * k));
    return z;
  }();
  return table;
}

double clausen_accelerated(double a) {
  if (numerics::frac_product(a, 2) == 0.0) return 0.0;
  const double r = a - std::nearbyint(a);  // [-1/2, 1/2]
  const double theta = 2.0 * kPi * r;
  const auto& z = zeta_even_table();
  const double x = theta / (2.0 * kPi);
  CompensatedSum<double> sum;
  sum.add(theta);
  sum.add(-theta * std::log(std::abs(theta)));
  double power = theta;  // theta * x^{2k}
  for (int k = 1; k < static_cast<int>(z.size()); ++k) {
    power *= x * x;
    const double term = z[k] * power / (k * (2.0 * k + 1.0));
    sum.add(term);
    if (std::abs(term) < 1e-18) break;
  }
  return sum.value();
}

double clausen_direct(double a, double tol, long long max_terms) {
  if (numerics::frac_product(a, 2) == 0.0) return 0.0;  // every sin(pi m) term
  const double half_angle = std::abs(numerics::sin_turns(0.5 * a));
  // Tail after M terms: <= min(1/M, 2 / (|sin(theta/2)| (M+1)^2)).
  long long terms = static_cast<long long>(std::ceil(std::sqrt(2.0 / (half_angle * tol))));
  terms = std::min(terms, static_cast<long long>(std::ceil(1.0 / tol)));
  if (terms > max_terms) {
    throw ClausenError("clausen: tolerance " + std::to_string(tol) + " needs " + std::to_string(terms) +
                       " terms at a = " + std::to_string(a));
  }
  CompensatedSum<double> sum;
  for (long long m = 1; m <= terms; ++m) {
    const double md = static_cast<double>(m);
    sum.add(numerics::sin_turns(numerics::frac_product(a, m)) / (md * md));
  }
  return sum.value();
}

}  // namespace

double clausen(double a, const ClausenOptions& options) {
  if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("clausen: a must lie in [0, 1]");
  if (!(options.tol > 0.0)) throw std::invalid_argument("clausen: tol must be positive");
  if (options.method == ClausenMethod::accelerated) return clausen_accelerated(a);
  return clausen_direct(a, options.tol, options.max_terms);
}

// ---------------------------------------------------------------------------
// degree 2

double t2_integrand(double a, int alpha, double t, const QuadratureSpec& quad, Branch branch) {
  require_positive_t(t);
  require_alpha(alpha);
  if (use_direct(t, quad, branch)) {
    // t^{-2} (1 + 2 t d/dt) (-(4t/alpha) S) = -(4/alpha) sum (k+a) e^{-l t} (3/t - 2 l)
    const double s = k_sum(quad.modes, [&](int k) {
      const double l = lambda(a, k);
      return (k + a) * std::exp(-l * t) * (3.0 / t - 2.0 * l);
    });
    return -4.0 / alpha * s;
  }
  // Dual form: the t^{-3/2} prefactor of S becomes t^{-1/2} after the factor t,
  // so (1 + 2 t d/dt) acts on each term through dual_term_weight.
  const double s = m_sum(quad.dual_terms, [&](int m) {
    return m * dual_term_weight(m, t) * std::exp(-static_cast<double>(m) * m / (4.0 * t)) *
           numerics::sin_turns(numerics::frac_product(a, m));
  });
  return -4.0 / alpha * s / (4.0 * std::pow(kPi, 1.5) * std::pow(t, 2.5));
}

TorsionCoefficient t2_numeric(HolonomyParameter a, int alpha, const QuadratureSpec& quad) {
  check_spec(quad);
  require_alpha(alpha);
  const double av = a.value();
  const Integral r = integrate_log([&](double t) { return t2_integrand(av, alpha, t, quad); }, av, quad);
  certify(r, quad, "t2_numeric");
  TorsionCoefficient out;
  // -(1 / (2 pi i)) = i / (2 pi)
  out.value = cplx(0.0, r.value / (2.0 * kPi));
  out.certificate = r.certificate;
  out.certificate.error_estimate /= 2.0 * kPi;
  out.certificate.branch_gap = relative_gap(t2_integrand(av, alpha, quad.t_star, quad, Branch::direct),
                                            t2_integrand(av, alpha, quad.t_star, quad, Branch::dual));
  out.certificate.truncation_bound = truncation_bound(av, quad);
  return out;
}

cplx t2_closed(double a, int alpha) {
  require_alpha(alpha);
  const double magnitude = Constants::gamma54 * clausen(a) / (std::sqrt(2.0) * std::pow(kPi, 2.5) * alpha);
  return cplx(0.0, -magnitude);  // 1/i = -i
}

// ---------------------------------------------------------------------------
// Gaussian moment

namespace {

double trapezoid_log(const std::function<double(double)>& g, double u0, double u1, double step) {
  const int panels = static_cast<int>(std::ceil((u1 - u0) / step));
  const double h = (u1 - u0) / panels;
  CompensatedSum<double> s;
  for (int i = 0; i <= panels; ++i) {
    const double w = (i == 0 || i == panels) ? 0.5 : 1.0;
    s.add(w * g(u0 + i * h));
  }
  return h * s.value();
}

double moment_target() { return std::pow(2.0, 1.5) * Constants::gamma54; }

}  // namespace

double gaussian_moment(double step) {
  // z = e^u: z^{3/2} e^{-z^2/4} dz = e^{5u/2} e^{-e^{2u}/4} du
  return trapezoid_log([](double u) { return std::exp(2.5 * u - 0.25 * std::exp(2.0 * u)); }, -40.0, 5.0, step);
}

double gaussian_moment_substituted(double step) {
  // v = e^u: v^{1/4} e^{-v} dv = e^{5u/4} e^{-e^u} du
  const double g = trapezoid_log([](double u) { return std::exp(1.25 * u - std::exp(u)); }, -80.0, 6.0, step);
  return std::pow(2.0, 1.5) * g;
}

GaussianMomentReport gaussian_moment_check() {
  GaussianMomentReport r;
  r.ratio = gaussian_moment(1.0 / 16.0) / moment_target();
  r.substitution_ratio = gaussian_moment_substituted(1.0 / 16.0) / moment_target();
  r.coarse_error = std::abs(gaussian_moment(0.5) / moment_target() - 1.0);
  r.fine_error = std::abs(gaussian_moment(0.25) / moment_target() - 1.0);
  r.order_exponent = std::log(r.fine_error) / std::log(r.coarse_error);
  return r;
}

// ---------------------------------------------------------------------------
// two-form

cplx TorsionTwoForm::evaluate(const std::map<int, cplx>& h, const std::map<int, cplx>& hp) const {
  const int reach = max_alpha();
  for (const auto* v : {&h, &hp}) {
    for (const auto& [k, c] : *v) {
      if (c != cplx{} && std::abs(k) > reach) {
        throw std::out_of_range("TorsionTwoForm::evaluate: Fourier mode " + std::to_string(k) +
                                " outside the stored range |alpha| <= " + std::to_string(reach));
      }
    }
  }
  auto at = [](const std::map<int, cplx>& v, int k) {
    const auto it = v.find(k);
    return it == v.end() ? cplx{} : it->second;
  };
  cplx sum{};
  for (const auto& [alpha, t] : coeff) {
    sum += t * (at(h, alpha) * at(hp, -alpha) - at(hp, alpha) * at(h, -alpha));
  }
  return sum;
}

TorsionTwoForm torsion_two_form(HolonomyParameter a, int max_alpha, Provenance provenance,
                                const QuadratureSpec& quad) {
  if (max_alpha < 1) throw std::invalid_argument("torsion_two_form: max_alpha must be >= 1");
  TorsionTwoForm form{a, {}, provenance};
  for (int alpha = 1; alpha <= max_alpha; ++alpha) {
    form.coeff[alpha] = provenance == Provenance::numeric ? t2_numeric(a, alpha, quad).value
                                                          : t2_closed(a.value(), alpha);
  }
  return form;
}

}  // namespace circle_torsion::torsion
