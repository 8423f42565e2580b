#include "stathyp/hyperbolic.hpp"

#include <cmath>
#include <numbers>

#include "stathyp/errors.hpp"

namespace stathyp {

Sl2 Sl2::rotation(double angle) {
  // R(theta) = [[cos, -sin], [sin, cos]] turns directions at i by -2 theta.
  const double theta = -0.5 * angle;
  return {std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta)};
}

Sl2 Sl2::lift(double t) {
  const double e = std::exp(0.5 * t);
  return {e, 0.0, 0.0, 1.0 / e};
}

Sl2 Sl2::affine_to(Complex z) {
  const double s = std::sqrt(z.imag());
  return {s, z.real() / s, 0.0, 1.0 / s};
}

Complex Sl2::apply(Complex z) const {
  const double x = z.real(), y = z.imag();
  const double cx_d = c * x + d;
  const double cy = c * y;
  const double den = cx_d * cx_d + cy * cy;
  const double re = ((a * x + b) * cx_d + a * c * y * y) / den;
  const double im = det() * y / den;
  return {re, im};
}

double hyperbolic_distance(Complex u, Complex v) {
  if (!(u.imag() > 0.0) || !(v.imag() > 0.0))
    throw DomainError("hyperbolic point must have positive imaginary part");
  const double chord = std::abs(u - v);
  return 2.0 * std::asinh(chord / (2.0 * std::sqrt(u.imag()) * std::sqrt(v.imag())));
}

Frame Frame::at(Complex z, double angle) {
  if (!(z.imag() > 0.0)) throw DomainError("hyperbolic point must have positive imaginary part");
  return Frame(Sl2::affine_to(z) * Sl2::rotation(angle));
}

double direction_angle(Complex u, Complex v) {
  if (!(u.imag() > 0.0) || !(v.imag() > 0.0))
    throw DomainError("hyperbolic point must have positive imaginary part");
  if (u == v) throw DegenerateError("direction between coincident points is undefined");
  // Move u to i; the disk coordinate of the image of v then has argument = angle.
  const Complex w((v.real() - u.real()) / u.imag(), v.imag() / u.imag());
  const Complex i(0.0, 1.0);
  const Complex zeta = (w - i) / (w + i);
  return std::arg(zeta);
}

Frame Frame::toward(Complex u, Complex v) { return at(u, direction_angle(u, v)); }

Sl2 ModularGenerator::matrix() const {
  return kind == Kind::translate ? Sl2::translation(static_cast<double>(shift)) : Sl2::inversion();
}

ModularReduction reduce_modular(Complex z) {
  if (!(z.imag() > 0.0) || !std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw DomainError("modular reduction needs a finite point with positive imaginary part");
  ModularReduction out{z, {}, Sl2::identity()};
  Complex w = z;
  // Each inversion multiplies Im by 1/|w|^2 > 1; the cap only guards against
  // non-terminating loops on pathological rounding.
  for (int iter = 0; iter < 100000; ++iter) {
    const double shift = std::round(w.real());
    if (shift != 0.0) {
      const ModularGenerator g{ModularGenerator::Kind::translate, -static_cast<long>(shift)};
      w = Complex(w.real() - shift, w.imag());
      out.word.push_back(g);
      out.matrix = g.matrix() * out.matrix;
    }
    if (std::norm(w) >= 1.0) break;
    const ModularGenerator s{ModularGenerator::Kind::invert, 0};
    w = Complex(-w.real(), w.imag()) / std::norm(w);
    out.word.push_back(s);
    out.matrix = s.matrix() * out.matrix;
  }
  out.reduced = w;
  return out;
}

Complex unreduce(const ReductionWord& word, Complex reduced) {
  Complex z = reduced;
  for (auto it = word.rbegin(); it != word.rend(); ++it) z = it->matrix().inverse().apply(z);
  return z;
}

bool in_fundamental_domain(Complex z, double tol) {
  return z.imag() > 0.0 && std::abs(z.real()) <= 0.5 + tol && std::abs(z) >= 1.0 - tol;
}

}  // namespace stathyp
