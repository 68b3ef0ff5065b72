#include "fominlab/continuum.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fominlab/error.hpp"

namespace fominlab {
namespace {

constexpr double kPi = std::numbers::pi;

double cross_ratio_value(ExtendedComplex x1, ExtendedComplex x2, ExtendedComplex y2,
                         ExtendedComplex y1) {
  const MobiusMap phi = MobiusMap::from_three_points(x1, y2, y1);
  const ExtendedComplex w = phi(x2);
  // The image of a boundary point is real up to round-off.
  if (w.infinite || std::abs(w.value.imag()) > 1e-9 * (1.0 + std::abs(w.value))) {
    throw Error(ErrorCode::WrongCyclicOrder, "points do not lie on a common circle");
  }
  const double u = w.value.real();
  if (!(u > 0.0 && u < 1.0)) {
    throw Error(ErrorCode::WrongCyclicOrder,
                "x1, x2, y2, y1 are not in cyclic order (Phi(x2) = " + std::to_string(u) + ")");
  }
  return u;
}

}  // namespace

double epk_halfplane(double x, double y) {
  if (!std::isfinite(x) || !std::isfinite(y)) {
    throw Error(ErrorCode::InfinitePoint, "use the disk kernel for points at infinity");
  }
  if (x == y) throw Error(ErrorCode::CoincidentPoints, "x = y");
  const double d = y - x;
  return 1.0 / (kPi * d * d);
}

double epk_halfplane(BoundaryPointH x, BoundaryPointH y) {
  if (x.infinite || y.infinite) {
    throw Error(ErrorCode::InfinitePoint, "use the disk kernel for points at infinity");
  }
  return epk_halfplane(x.x, y.x);
}

double epk_disk(double theta1, double theta2) {
  // 1 - cos(d) = 2 sin^2(d/2); the sine form keeps precision for close points.
  const double s = std::sin(0.5 * (theta2 - theta1));
  if (std::abs(s) < 1e-15) throw Error(ErrorCode::CoincidentPoints, "angles coincide mod 2pi");
  return 1.0 / (4.0 * kPi * s * s);
}

double covariance_check(const MobiusMap& f, double x, double y) {
  const Complex fx = f.apply(x);
  const Complex fy = f.apply(y);
  const double lhs = epk_halfplane(x, y);
  const double rhs = std::abs(f.derivative(x)) * std::abs(f.derivative(y)) *
                     epk_disk(std::arg(fx), std::arg(fy));
  return std::abs(lhs - rhs);
}

double det_ratio_disk(std::span<const double> angles_x, std::span<const double> angles_y) {
  const std::size_t n = angles_x.size();
  if (n == 0 || angles_y.size() != n) {
    throw Error(ErrorCode::InvalidArgument, "need n >= 1 angles for both x and y");
  }
  std::vector<double> all(angles_x.begin(), angles_x.end());
  all.insert(all.end(), angles_y.begin(), angles_y.end());
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j)
      if (std::abs(std::sin(0.5 * (all[i] - all[j]))) < 1e-15)
        throw Error(ErrorCode::CoincidentPoints, "all 2n angles must be distinct");
  Eigen::MatrixXd m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < n; ++l)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l)) =
          epk_disk(angles_x[i], angles_y[l]);
  // Scaling row i by 1/H(x^i, y^i) turns the ratio into det of a unit-diagonal
  // matrix, which is better conditioned than the raw determinant.
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i) {
    const double d = m(i, i);
    m.row(i) /= d;
  }
  if (n == 1) return 1.0;
  if (n == 2) return 1.0 - m(0, 1) * m(1, 0);
  return m.partialPivLu().determinant();
}

double avoid_phi(double u) { return u * (2.0 - u); }

double sle2_avoid_probability(double x, double y) {
  if (!(x > 0.0 && x < y && std::isfinite(y))) {
    throw Error(ErrorCode::OrderViolation, "need 0 < x < y < infinity");
  }
  return avoid_phi(x / y);
}

double ode_residual(double u) {
  const double phi = avoid_phi(u);
  const double d1 = 2.0 - 2.0 * u;
  const double d2 = -2.0;
  return u * u * (1.0 - u) * d2 + 2.0 * u * d1 - 2.0 * (1.0 - u) * phi;
}

double corollary_avoid_probability(BoundaryPointH x1, BoundaryPointH x2, BoundaryPointH y2,
                                   BoundaryPointH y1) {
  const double u = cross_ratio_value(x1.extended(), x2.extended(), y2.extended(), y1.extended());
  return avoid_phi(u);
}

double corollary_avoid_probability(BoundaryPointD x1, BoundaryPointD x2, BoundaryPointD y2,
                                   BoundaryPointD y1) {
  const double u = cross_ratio_value(x1.point(), x2.point(), y2.point(), y1.point());
  return avoid_phi(u);
}

}  // namespace fominlab
