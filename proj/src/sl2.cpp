#include "circle_torsion/sl2.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "circle_torsion/numerics.hpp"

namespace circle_torsion::sl2 {

using numerics::kPi;
using cplx = std::complex<double>;

GroupElement::GroupElement(const Matrix2& m) : m_(m) {
  const double det = m.determinant();
  if (!(std::abs(det - 1.0) <= 1e-12 * (1.0 + m.squaredNorm()))) {
    throw std::invalid_argument("GroupElement: determinant " + std::to_string(det) + " is not 1");
  }
}

GroupElement GroupElement::identity() { return GroupElement(Matrix2::Identity(), Unchecked{}); }

GroupElement GroupElement::rotation(double theta) {
  Matrix2 m;
  m << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return GroupElement(m, Unchecked{});
}

GroupElement GroupElement::inverse() const {
  Matrix2 m;
  m << m_(1, 1), -m_(0, 1), -m_(1, 0), m_(0, 0);
  return GroupElement(m, Unchecked{});
}

GroupElement exp_traceless(const Matrix2& e) {
  if (std::abs(e.trace()) > 1e-14 * (1.0 + e.norm())) throw std::invalid_argument("exp_traceless: trace is nonzero");
  // E^2 = delta I
  const double delta = e(0, 0) * e(0, 0) + e(0, 1) * e(1, 0);
  double c, s;  // exp(E) = c I + s E
  if (std::abs(delta) < 1e-8) {
    c = 1.0 + delta / 2.0 + delta * delta / 24.0;
    s = 1.0 + delta / 6.0 + delta * delta / 120.0;
  } else if (delta > 0.0) {
    const double r = std::sqrt(delta);
    c = std::cosh(r);
    s = std::sinh(r) / r;
  } else {
    const double r = std::sqrt(-delta);
    c = std::cos(r);
    s = std::sin(r) / r;
  }
  Matrix2 m = c * Matrix2::Identity() + s * e;
  // restore det = 1 exactly up to rounding of the trace-free part
  m /= std::sqrt(m.determinant());
  return GroupElement(m);
}

HPoint::HPoint(double x_, double y_) : x(x_), y(y_) {
  if (!(y_ > 0.0)) throw std::invalid_argument("HPoint: y must be positive");
}

HPoint base_point() { return {0.0, 1.0}; }

HPoint mobius(const GroupElement& g, const HPoint& z) {
  const Matrix2& m = g.matrix();
  const cplx w = (m(0, 0) * z.z() + m(0, 1)) / (m(1, 0) * z.z() + m(1, 1));
  // Im w = y / |cz + d|^2, computed without cancellation
  const double y = z.y / std::norm(m(1, 0) * z.z() + m(1, 1));
  return {w.real(), y};
}

double iwasawa_angle(const GroupElement& g) {
  const Matrix2& m = g.matrix();
  return std::atan2(m(1, 0) - m(0, 1), m(0, 0) + m(1, 1));
}

namespace {

// Cayley map centred at z: geodesics through z become diameters.
cplx centred(const HPoint& z, const HPoint& w) { return (w.z() - z.z()) / (w.z() - std::conj(z.z())); }

bool same_point(const HPoint& p, const HPoint& q) { return p.x == q.x && p.y == q.y; }

double wrap(double angle) {
  double r = std::remainder(angle, 2.0 * kPi);  // [-pi, pi]
  if (r == -kPi) r = kPi;
  return r;
}

}  // namespace

double signed_vertex_angle(const HPoint& z, const HPoint& w1, const HPoint& w2) {
  return std::arg(centred(z, w2) / centred(z, w1));
}

double triangle_area(const HPoint& z0, const HPoint& z1, const HPoint& z2) {
  if (same_point(z0, z1) || same_point(z1, z2) || same_point(z0, z2)) return 0.0;
  const double a0 = signed_vertex_angle(z0, z1, z2);
  const double a1 = std::abs(signed_vertex_angle(z1, z2, z0));
  const double a2 = std::abs(signed_vertex_angle(z2, z0, z1));
  const double defect = std::max(0.0, kPi - std::abs(a0) - a1 - a2);
  if (a0 == 0.0 || std::abs(a0) == kPi) return 0.0;
  return a0 > 0.0 ? defect : -defect;
}

double triangle_area_green(const HPoint& z0, const HPoint& z1, const HPoint& z2) {
  // arc x = c + R cos(phi), y = R sin(phi) contributes -(phi_end - phi_start); vertical edges 0
  const HPoint* pts[] = {&z0, &z1, &z2, &z0};
  double s = 0.0;
  for (int i = 0; i < 3; ++i) {
    const HPoint& p = *pts[i];
    const HPoint& q = *pts[i + 1];
    if (p.x == q.x) continue;
    const double c = (q.x * q.x + q.y * q.y - p.x * p.x - p.y * p.y) / (2.0 * (q.x - p.x));
    s -= std::atan2(q.y, q.x - c) - std::atan2(p.y, p.x - c);
  }
  return s;
}

double area_cocycle(const GroupElement& g, const GroupElement& h) {
  const HPoint o = base_point();
  return triangle_area(o, mobius(g, o), mobius(g * h, o)) / (2.0 * kPi);
}

double angle_cocycle(const GroupElement& g, const GroupElement& h) {
  return wrap(iwasawa_angle(g * h) - iwasawa_angle(g) - iwasawa_angle(h)) / (2.0 * kPi);
}

double lie_pairing(double (*cochain)(const GroupElement&, const GroupElement&), const Matrix2& x,
                   const Matrix2& y, double step) {
  auto anti = [&](double s, double t) {
    const GroupElement gs = exp_traceless(s * x), gt = exp_traceless(t * y);
    return cochain(gs, gt) - cochain(gt, gs);
  };
  const double h = step;
  return (anti(h, h) - anti(h, -h) - anti(-h, h) + anti(-h, -h)) / (4.0 * h * h);
}

double evaluate_on_relator(double (*cochain)(const GroupElement&, const GroupElement&),
                           std::span<const GroupElement> generators, std::span<const Letter> relator) {
  numerics::CompensatedSum<double> sum;
  GroupElement prefix = GroupElement::identity();
  for (const Letter& l : relator) {
    if (l.generator < 0 || l.generator >= static_cast<int>(generators.size()) || (l.power != 1 && l.power != -1)) {
      throw std::invalid_argument("evaluate_on_relator: bad letter");
    }
    const GroupElement& x = generators[l.generator];
    const GroupElement y = l.power == 1 ? x : x.inverse();
    sum.add(cochain(prefix, y));
    if (l.power == -1) sum.add(-cochain(x, y));
    prefix = prefix * y;
  }
  return sum.value();
}

std::vector<GroupElement> genus_two_generators() {
  // Centre-to-side distance d of the regular octagon with angles pi/4:
  // cosh d = cot(pi/8).  Opposite sides are paired by translation by 2d.
  const double d = std::acosh(1.0 / std::tan(kPi / 8.0));
  Matrix2 t;
  t << std::exp(d), 0.0, 0.0, std::exp(-d);  // translation by 2d along the axis through o
  const GroupElement translation(t);
  std::vector<GroupElement> out;
  for (int j = 0; j < 4; ++j) {
    // SO(2) angle phi turns the tangent plane at o by 2 phi
    const GroupElement r = GroupElement::rotation(j * kPi / 8.0);
    out.push_back(r * translation * r.inverse());
  }
  return out;
}

std::vector<Letter> genus_two_relator() {
  return {{0, 1}, {1, -1}, {2, 1}, {3, -1}, {0, -1}, {1, 1}, {2, -1}, {3, 1}};
}

Matrix2 generator_a() { return (Matrix2() << 1.0, 0.0, 0.0, -1.0).finished(); }
Matrix2 generator_n() { return (Matrix2() << 0.0, 1.0, 0.0, 0.0).finished(); }
Matrix2 generator_rotation() { return (Matrix2() << 0.0, -1.0, 1.0, 0.0).finished(); }

namespace {
void require_traceless(const Matrix2& e) {
  if (std::abs(e.trace()) > 1e-14 * (1.0 + e.norm())) throw std::invalid_argument("generator must be traceless");
}
}  // namespace

witt::VectorField fundamental_field_circle(const Matrix2& e) {
  require_traceless(e);
  const double p = e(0, 0), q = e(0, 1), r = e(1, 0);
  // f(x) = (q + 2 p xi - r xi^2) / (pi (1 + xi^2)) with xi = tan(pi x)
  const cplx i{0.0, 1.0};
  const cplx c0 = (q - r) / (2.0 * kPi);
  const cplx c1 = p / (2.0 * kPi * i) + (q + r) / (4.0 * kPi);
  const cplx cm1 = -p / (2.0 * kPi * i) + (q + r) / (4.0 * kPi);
  return witt::VectorField({{-1, cm1}, {0, c0}, {1, c1}}, true);
}

Eigen::Vector2d fundamental_field_plane(const Matrix2& e, const HPoint& z) {
  require_traceless(e);
  const double p = e(0, 0), q = e(0, 1), r = e(1, 0);
  const cplx v = q + 2.0 * p * z.z() - r * z.z() * z.z();
  return {v.real(), v.imag()};
}

double hyperbolic_volume(const HPoint& z, const Eigen::Vector2d& v, const Eigen::Vector2d& w) {
  return (v.x() * w.y() - v.y() * w.x()) / (z.y * z.y);
}

ClassCoefficient class_coefficient(const torsion::TorsionTwoForm& t) {
  ClassCoefficient out;
  const auto a_star = fundamental_field_circle(generator_a());
  const auto n_star = fundamental_field_circle(generator_n());
  out.pullback = witt::lie_cocycle(t, a_star, n_star);
  out.volume = hyperbolic_volume(base_point(), fundamental_field_plane(generator_a()),
                                 fundamental_field_plane(generator_n()));
  out.coefficient = 2.0 * kPi * out.pullback / out.volume;
  out.published = -torsion::Constants::gamma54 * torsion::clausen(t.a.value()) /
                  (std::pow(2.0, 2.5) * std::pow(kPi, 3.5));
  return out;
}

}  // namespace circle_torsion::sl2
