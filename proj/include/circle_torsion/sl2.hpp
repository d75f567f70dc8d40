#pragma once

// SL(2,R) acting on the upper half-plane (curvature -1, base point o = i) and
// on the circle R/Z through xi = tan(pi x), the area and angle 2-cocycles, and
// the normalisation of the torsion class against the area generator.
//
// Orientation: the standard one, dx ^ dy / y^2.  With it
// vol(A#(o), N#(o)) = -2 for A = diag(1, -1), N = [[0, 1], [0, 0]].  The
// rotation [[cos t, -sin t], [sin t, cos t]] turns the tangent plane at o by -2t
// and moves the circle coordinate x by -t / pi.

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "circle_torsion/torsion.hpp"
#include "circle_torsion/witt.hpp"

namespace circle_torsion::sl2 {

using Matrix2 = Eigen::Matrix2d;

class GroupElement {
 public:
  /// Throws std::invalid_argument unless |det - 1| <= 1e-12 (1 + |g|^2).
  explicit GroupElement(const Matrix2& m);

  static GroupElement identity();
  /// [[cos t, -sin t], [sin t, cos t]].
  static GroupElement rotation(double theta);

  const Matrix2& matrix() const { return m_; }
  GroupElement inverse() const;

  friend GroupElement operator*(const GroupElement& g, const GroupElement& h) {
    return GroupElement(g.m_ * h.m_, Unchecked{});
  }

 private:
  struct Unchecked {};
  GroupElement(const Matrix2& m, Unchecked) : m_(m) {}
  Matrix2 m_;
};

/// exp of a traceless real matrix (closed form through cosh/sinh or cos/sin).
GroupElement exp_traceless(const Matrix2& e);

struct HPoint {
  double x = 0.0;
  double y = 1.0;

  /// Throws std::invalid_argument unless y > 0.
  HPoint(double x_, double y_);
  std::complex<double> z() const { return {x, y}; }
};

HPoint base_point();

HPoint mobius(const GroupElement& g, const HPoint& z);

/// Angle of the rotation factor in the polar decomposition g = R(theta) P,
/// in (-pi, pi]: atan2(c - b, a + d).
double iwasawa_angle(const GroupElement& g);

/// Oriented hyperbolic area of the geodesic triangle (z0, z1, z2):
/// sign(orientation) * (pi - A - B - C).  Coincident vertices give 0.
double triangle_area(const HPoint& z0, const HPoint& z1, const HPoint& z2);

/// Independent path for the same area: Green's theorem with d(dx / y) = dx ^ dy / y^2
/// around the three geodesic edges.
double triangle_area_green(const HPoint& z0, const HPoint& z1, const HPoint& z2);

/// Interior angle at z between the geodesics toward w1 and w2, signed
/// counterclockwise from w1 to w2.
double signed_vertex_angle(const HPoint& z, const HPoint& w1, const HPoint& w2);

/// (1 / 2 pi) area(o, g o, g h o).
double area_cocycle(const GroupElement& g, const GroupElement& h);

/// (1 / 2 pi) wrap(theta(g h) - theta(g) - theta(h)) with wrap into (-pi, pi].
double angle_cocycle(const GroupElement& g, const GroupElement& h);

/// Lie-algebra pairing of a group 2-cochain: the antisymmetrised mixed second
/// derivative d^2/ds dt [c(e^{sX}, e^{tY}) - c(e^{tY}, e^{sX})] at 0, by central differences.
double lie_pairing(double (*cochain)(const GroupElement&, const GroupElement&), const Matrix2& x,
                   const Matrix2& y, double step = 1e-3);

/// Evaluation of a group 2-cochain on the 2-cycle of a relator y_1 ... y_n = 1:
/// sum_i c(p_{i-1}, y_i) - sum over inverse letters x^{-1} of c(x, x^{-1}),
/// with p_i = y_1 ... y_i.  Letters are (generator index, +1 or -1).
struct Letter {
  int generator;
  int power;
};
double evaluate_on_relator(double (*cochain)(const GroupElement&, const GroupElement&),
                           std::span<const GroupElement> generators, std::span<const Letter> relator);

/// Lifted side pairings of the regular hyperbolic octagon with interior angles
/// pi/4 (opposite sides identified), and the relator
/// g0 g1^-1 g2 g3^-1 g0^-1 g1 g2^-1 g3.
std::vector<GroupElement> genus_two_generators();
std::vector<Letter> genus_two_relator();

/// Generators of the fundamental vector fields.
Matrix2 generator_a();
Matrix2 generator_n();
Matrix2 generator_rotation();

/// Vector field of t -> exp(tE) acting on xi = tan(pi x).  For E = [[p, q], [r, -p]]:
/// c_0 = (q - r) / 2 pi,  c_{+-1} = +-p / (2 pi i) + (q + r) / 4 pi.
/// Throws std::invalid_argument if E is not traceless.
witt::VectorField fundamental_field_circle(const Matrix2& e);

/// d/dt exp(tE) z at t = 0, as a tangent vector (dx, dy).
Eigen::Vector2d fundamental_field_plane(const Matrix2& e, const HPoint& z = base_point());

/// (dx ^ dy / y^2)(v, w) at z.
double hyperbolic_volume(const HPoint& z, const Eigen::Vector2d& v, const Eigen::Vector2d& w);

struct ClassCoefficient {
  /// i* T_2 (A#, N#) = lie_cocycle(T, A*, N*).
  std::complex<double> pullback;
  double volume = 0.0;
  /// c with i* T_2 = (c / 2 pi) vol.
  std::complex<double> coefficient;
  /// -(1 / (2^{5/2} pi^{7/2})) Gamma(5/4) Cl(a), the published coefficient.
  double published = 0.0;
};

ClassCoefficient class_coefficient(const torsion::TorsionTwoForm& t);

}  // namespace circle_torsion::sl2
