#include "circle_torsion/witt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "circle_torsion/numerics.hpp"

namespace circle_torsion::witt {

using numerics::kPi;

namespace {
constexpr cplx kTwoPiI{0.0, 2.0 * kPi};

void accumulate(std::map<int, cplx>& m, int k, cplx v) {
  if (v == cplx{}) return;
  const auto [it, inserted] = m.try_emplace(k, v);
  if (inserted) return;
  it->second += v;
  if (it->second == cplx{}) m.erase(it);
}
}  // namespace

VectorField::VectorField(std::map<int, cplx> coeffs, bool real) : real_(real) {
  for (const auto& [k, c] : coeffs) accumulate(coeffs_, k, c);
  double scale = 0.0;
  for (const auto& [k, c] : coeffs_) scale = std::max(scale, std::abs(c));
  if (real_ && !satisfies_reality(1e-12 * scale)) {
    throw std::invalid_argument("VectorField: coefficients violate c_{-k} = conj(c_k)");
  }
}

VectorField VectorField::basis(int k) { return VectorField({{k, 1.0}}); }

cplx VectorField::coeff(int k) const {
  const auto it = coeffs_.find(k);
  return it == coeffs_.end() ? cplx{} : it->second;
}

bool VectorField::satisfies_reality(double tol) const {
  for (const auto& [k, c] : coeffs_) {
    if (std::abs(coeff(-k) - std::conj(c)) > tol) return false;
  }
  return true;
}

VectorField& VectorField::operator+=(const VectorField& rhs) {
  for (const auto& [k, c] : rhs.coeffs_) accumulate(coeffs_, k, c);
  real_ = real_ && rhs.real_;
  return *this;
}

VectorField& VectorField::operator*=(cplx s) {
  if (s == cplx{}) coeffs_.clear();
  for (auto& [k, c] : coeffs_) c *= s;
  real_ = real_ && s.imag() == 0.0;
  return *this;
}

cplx MetricVariation::coeff(int k) const {
  const auto it = coeffs.find(k);
  return it == coeffs.end() ? cplx{} : it->second;
}

VectorField bracket(const VectorField& x, const VectorField& y) {
  std::map<int, cplx> out;
  for (const auto& [k, c] : x.coeffs()) {
    for (const auto& [h, d] : y.coeffs()) {
      accumulate(out, k + h, c * d * kTwoPiI * static_cast<double>(h - k));
    }
  }
  return VectorField(std::move(out), x.is_real() && y.is_real());
}

MetricVariation metric_variation(const VectorField& x) {
  MetricVariation h;
  for (const auto& [k, c] : x.coeffs()) accumulate(h.coeffs, k, -2.0 * kTwoPiI * static_cast<double>(k) * c);
  return h;
}

cplx lie_cocycle(const torsion::TorsionTwoForm& t, const VectorField& x, const VectorField& y) {
  return t.evaluate(metric_variation(x).coeffs, metric_variation(y).coeffs);
}

cplx u_cochain(const VectorField& x) { return x.coeff(0); }

cplx coboundary_du(const VectorField& x, const VectorField& y) { return u_cochain(bracket(x, y)); }

ExactnessReport verify_exactness(const torsion::TorsionTwoForm& t, int k_max, double tol) {
  if (k_max < 1) throw std::invalid_argument("verify_exactness: k_max must be >= 1");
  if (t.max_alpha() < k_max) throw std::out_of_range("verify_exactness: two-form does not reach k_max");
  ExactnessReport r;
  r.a = t.a.value();
  r.k_max = k_max;

  std::vector<std::pair<cplx, cplx>> samples;  // (cocycle, du)
  for (int k = -k_max; k <= k_max; ++k) {
    for (int h = -k_max; h <= k_max; ++h) {
      const auto xk = VectorField::basis(k), xh = VectorField::basis(h);
      samples.emplace_back(lie_cocycle(t, xk, xh), coboundary_du(xk, xh));
    }
  }
  cplx num{};
  double den = 0.0;
  for (const auto& [c, du] : samples) {
    num += std::conj(du) * c;
    den += std::norm(du);
  }
  r.lambda = num / den;
  for (const auto& [c, du] : samples) r.residual = std::max(r.residual, std::abs(c - r.lambda * du));
  r.pairs = static_cast<int>(samples.size());

  const double cl = torsion::clausen(r.a);
  r.normalized = cl == 0.0 ? cplx{} : r.lambda / (torsion::Constants::gamma54 * cl);
  r.published_lambda = -std::pow(2.0, 1.5) * std::pow(kPi, 1.5) * torsion::Constants::gamma54 * cl;
  r.pass = r.residual <= tol;
  return r;
}

ExactnessReport verify_exactness(spectral::HolonomyParameter a, int k_max, const torsion::QuadratureSpec& quad,
                                 double tol) {
  return verify_exactness(torsion::torsion_two_form(a, k_max, torsion::Provenance::numeric, quad), k_max, tol);
}

}  // namespace circle_torsion::witt
