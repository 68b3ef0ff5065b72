#pragma once

#include <span>

#include "fominlab/mobius.hpp"

namespace fominlab {

/// Boundary point of the upper half-plane: a real coordinate or infinity.
struct BoundaryPointH {
  double x = 0.0;
  bool infinite = false;

  static BoundaryPointH infinity() { return {0.0, true}; }
  ExtendedComplex extended() const {
    return infinite ? ExtendedComplex::infinity() : ExtendedComplex(x);
  }
};

/// Boundary point of the unit disk, e^{i theta}.
struct BoundaryPointD {
  double theta = 0.0;
  Complex point() const { return std::polar(1.0, theta); }
};

/// 1 / (pi (y - x)^2).
double epk_halfplane(double x, double y);
double epk_halfplane(BoundaryPointH x, BoundaryPointH y);

/// 1 / (2 pi (1 - cos(theta2 - theta1))).
double epk_disk(double theta1, double theta2);

/// |H_dH(x, y) - |f'(x)| |f'(y)| H_dD(arg f(x), arg f(y))| for a Mobius map f
/// taking the upper half-plane onto the unit disk.
double covariance_check(const MobiusMap& f, double x, double y);

/// det [H_dD(x^i, y^l)] / prod_i H_dD(x^i, y^i).
double det_ratio_disk(std::span<const double> angles_x, std::span<const double> angles_y);

/// phi(x / y) = (x/y)(2 - x/y) for 0 < x < y.
double sle2_avoid_probability(double x, double y);

/// phi(u) = u(2 - u).
double avoid_phi(double u);

/// u^2 (1-u) phi'' + 2u phi' - 2(1-u) phi evaluated at phi(u) = u(2-u).
double ode_residual(double u);

/// Phi(x2)(2 - Phi(x2)) where Phi is the Mobius map with Phi(x1) = 0,
/// Phi(y2) = 1, Phi(y1) = infinity. Throws WrongCyclicOrder unless
/// Phi(x2) lies in (0, 1).
double corollary_avoid_probability(BoundaryPointH x1, BoundaryPointH x2, BoundaryPointH y2,
                                   BoundaryPointH y1);
double corollary_avoid_probability(BoundaryPointD x1, BoundaryPointD x2, BoundaryPointD y2,
                                   BoundaryPointD y1);

}  // namespace fominlab
