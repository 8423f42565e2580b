#pragma once

#include <complex>
#include <vector>

namespace stathyp {

using Complex = std::complex<double>;

/// Element of SL(2, R) acting on the upper half-plane by Mobius maps.
struct Sl2 {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

  static Sl2 identity() { return {}; }
  /// z -> z + n.
  static Sl2 translation(double n) { return {1.0, n, 0.0, 1.0}; }
  /// z -> -1/z.
  static Sl2 inversion() { return {0.0, -1.0, 1.0, 0.0}; }
  /// Elliptic element fixing i that turns tangent directions at i by `angle`.
  static Sl2 rotation(double angle);
  /// Hyperbolic element translating the imaginary axis upward by `t`.
  static Sl2 lift(double t);
  /// The affine map i -> z.
  static Sl2 affine_to(Complex z);

  Sl2 operator*(const Sl2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
  Sl2 inverse() const { return {d, -b, -c, a}; }
  double det() const { return a * d - b * c; }

  /// Mobius action; the imaginary part is computed as Im z / |cz + d|^2 so it
  /// keeps full relative precision near the real axis.
  Complex apply(Complex z) const;
};

/// Hyperbolic distance in the upper half-plane, evaluated as
/// 2 asinh(|u - v| / (2 sqrt(Im u Im v))), which equals
/// arccosh(1 + |u - v|^2 / (2 Im u Im v)) without cancellation near 0.
double hyperbolic_distance(Complex u, Complex v);

/// Unit tangent vector of H^2 stored as the matrix that carries the vertical
/// unit vector at i onto it. Flowing and rotating are right multiplications.
class Frame {
 public:
  Frame() = default;
  explicit Frame(const Sl2& m) : m_(m) {}

  /// Frame at z pointing in direction `angle` (0 = straight up, counterclockwise).
  static Frame at(Complex z, double angle);
  /// Frame at u pointing along the geodesic toward v (u != v).
  static Frame toward(Complex u, Complex v);

  Complex point() const { return m_.apply(Complex(0.0, 1.0)); }
  Frame flowed(double t) const { return Frame(m_ * Sl2::lift(t)); }
  Frame rotated(double angle) const { return Frame(m_ * Sl2::rotation(angle)); }
  /// Left-multiplies by an isometry; used to renormalize into a fundamental domain.
  Frame moved_by(const Sl2& g) const { return Frame(g * m_); }
  const Sl2& matrix() const { return m_; }

 private:
  Sl2 m_;
};

/// Direction angle at u of the geodesic toward v, measured as in Frame::at.
double direction_angle(Complex u, Complex v);

/// One generator of SL(2, Z) applied during reduction.
struct ModularGenerator {
  enum class Kind { translate, invert };
  Kind kind = Kind::translate;
  long shift = 0;  // z -> z + shift for Kind::translate

  Sl2 matrix() const;
  bool operator==(const ModularGenerator&) const = default;
};

using ReductionWord = std::vector<ModularGenerator>;

struct ModularReduction {
  Complex reduced;
  /// Generators in the order they were applied: reduced = g_k ... g_1 (z).
  ReductionWord word;
  /// Product g_k ... g_1 as a matrix.
  Sl2 matrix;
};

/// Gauss reduction of z into |Re z| <= 1/2, |z| >= 1.
ModularReduction reduce_modular(Complex z);

/// Undoes a reduction: returns g_1^{-1} ... g_k^{-1} (reduced).
Complex unreduce(const ReductionWord& word, Complex reduced);

/// True when z lies in the closed standard fundamental domain (up to `tol`).
bool in_fundamental_domain(Complex z, double tol = 1e-12);

}  // namespace stathyp
