#include "fominlab/mobius.hpp"

#include <cmath>
#include <limits>

#include "fominlab/error.hpp"

namespace fominlab {

MobiusMap::MobiusMap(Complex a, Complex b, Complex c, Complex d) {
  const Complex det = a * d - b * c;
  if (std::abs(det) == 0.0 || !std::isfinite(std::abs(det))) {
    throw Error(ErrorCode::InvalidArgument, "Mobius coefficients must have ad - bc != 0");
  }
  const Complex s = std::sqrt(det);
  a_ = a / s;
  b_ = b / s;
  c_ = c / s;
  d_ = d / s;
}

MobiusMap MobiusMap::halfplane_to_disk() {
  const Complex i(0.0, 1.0);
  return {i, 1.0, 1.0, i};
}

MobiusMap MobiusMap::disk_automorphism(double alpha, Complex a) {
  if (!(std::abs(a) < 1.0)) throw Error(ErrorCode::InvalidArgument, "|a| must be < 1");
  const Complex rot = std::polar(1.0, alpha);
  return {rot, -rot * a, -std::conj(a), 1.0};
}

MobiusMap MobiusMap::from_three_points(ExtendedComplex z1, ExtendedComplex z2,
                                       ExtendedComplex z3) {
  auto same = [](const ExtendedComplex& p, const ExtendedComplex& q) {
    if (p.infinite || q.infinite) return p.infinite && q.infinite;
    return p.value == q.value;
  };
  if (same(z1, z2) || same(z2, z3) || same(z1, z3)) {
    throw Error(ErrorCode::CoincidentPoints, "three distinct points required");
  }
  // (z - z1)(z2 - z3) / ((z - z3)(z2 - z1)), with the factors containing an
  // infinite point dropped.
  if (z1.infinite) return {0.0, z2.value - z3.value, 1.0, -z3.value};
  if (z2.infinite) return {1.0, -z1.value, 1.0, -z3.value};
  if (z3.infinite) return {1.0, -z1.value, 0.0, z2.value - z1.value};
  const Complex k = z2.value - z3.value;
  const Complex m = z2.value - z1.value;
  return {k, -k * z1.value, m, -m * z3.value};
}

ExtendedComplex MobiusMap::operator()(ExtendedComplex z) const {
  if (z.infinite) {
    if (c_ == 0.0) return ExtendedComplex::infinity();
    return a_ / c_;
  }
  const Complex cz = c_ * z.value;
  const Complex den = cz + d_;
  // Cancellation down to rounding level means z is the pole.
  if (std::abs(den) <= 8 * std::numeric_limits<double>::epsilon() * (std::abs(cz) + std::abs(d_))) {
    return ExtendedComplex::infinity();
  }
  return (a_ * z.value + b_) / den;
}

Complex MobiusMap::apply(Complex z) const {
  const ExtendedComplex w = (*this)(ExtendedComplex(z));
  if (w.infinite) throw Error(ErrorCode::InfinitePoint, "point maps to infinity");
  return w.value;
}

Complex MobiusMap::derivative(Complex z) const {
  const Complex den = c_ * z + d_;
  return 1.0 / (den * den);
}

MobiusMap MobiusMap::compose(const MobiusMap& g) const {
  return {a_ * g.a_ + b_ * g.c_, a_ * g.b_ + b_ * g.d_, c_ * g.a_ + d_ * g.c_,
          c_ * g.b_ + d_ * g.d_};
}

MobiusMap MobiusMap::inverse() const { return {d_, -b_, -c_, a_}; }

}  // namespace fominlab
