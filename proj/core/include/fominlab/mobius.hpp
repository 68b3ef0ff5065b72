#pragma once

#include <complex>

namespace fominlab {

using Complex = std::complex<double>;

/// A point of the Riemann sphere. `value` is ignored when `infinite` is set.
struct ExtendedComplex {
  Complex value{};
  bool infinite = false;

  ExtendedComplex() = default;
  ExtendedComplex(Complex z) : value(z) {}  // NOLINT: implicit on purpose
  ExtendedComplex(double x) : value(x) {}   // NOLINT
  static ExtendedComplex infinity() {
    ExtendedComplex p;
    p.infinite = true;
    return p;
  }
};

/// z -> (az + b) / (cz + d), stored with ad - bc = 1.
class MobiusMap {
 public:
  MobiusMap(Complex a, Complex b, Complex c, Complex d);

  static MobiusMap identity() { return {1.0, 0.0, 0.0, 1.0}; }

  /// (iz + 1) / (z + i): upper half-plane onto the unit disk with
  /// 0 -> -i, 1 -> 1, infinity -> i.
  static MobiusMap halfplane_to_disk();

  /// e^{i alpha} (z - a) / (1 - conj(a) z) for |a| < 1.
  static MobiusMap disk_automorphism(double alpha, Complex a);

  /// The unique map sending z1 -> 0, z2 -> 1, z3 -> infinity.
  static MobiusMap from_three_points(ExtendedComplex z1, ExtendedComplex z2, ExtendedComplex z3);

  Complex a() const noexcept { return a_; }
  Complex b() const noexcept { return b_; }
  Complex c() const noexcept { return c_; }
  Complex d() const noexcept { return d_; }

  ExtendedComplex operator()(ExtendedComplex z) const;
  Complex apply(Complex z) const;  // throws InfinitePoint at the pole
  Complex derivative(Complex z) const;

  /// (*this) o (inner).
  MobiusMap compose(const MobiusMap& inner) const;
  MobiusMap inverse() const;

 private:
  Complex a_, b_, c_, d_;
};

}  // namespace fominlab
