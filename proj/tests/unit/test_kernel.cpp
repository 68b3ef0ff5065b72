#include <doctest.h>

#include <cmath>
#include <memory>
#include <vector>

#include "fominlab/error.hpp"
#include "fominlab/kernel.hpp"

using namespace fominlab;

namespace {

std::shared_ptr<const LatticeDomain> share(LatticeDomain d) {
  return std::make_shared<const LatticeDomain>(std::move(d));
}

// Gauss-Seidel on h(z) = (1/4) sum_w h(w), h = 1 at y and 0 elsewhere on dA.
std::vector<double> harmonic_oracle(const LatticeDomain& d, Point y) {
  std::vector<double> h(d.interior_size(), 0.0);
  const int target = d.site_id(y);
  for (int sweep = 0; sweep < 20000; ++sweep) {
    double change = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
      double s = 0.0;
      for (int nb : d.neighbors(i)) {
        if (d.is_interior_site(nb)) {
          s += h[static_cast<std::size_t>(nb)];
        } else if (nb == target) {
          s += 1.0;
        }
      }
      s *= 0.25;
      change = std::max(change, std::abs(s - h[i]));
      h[i] = s;
    }
    if (change < 1e-15) break;
  }
  return h;
}

// All counterclockwise 4-tuples taken from the boundary circuit.
template <class Fn>
void for_each_ccw_tuple(const LatticeDomain& d, Fn&& fn) {
  const auto c = d.boundary_circuit();
  const std::size_t m = c.size();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      for (std::size_t k = j + 1; k < m; ++k)
        for (std::size_t l = k + 1; l < m; ++l) fn(std::vector<Point>{c[i], c[j], c[k], c[l]});
}

}  // namespace

TEST_SUITE("kernel") {

TEST_CASE("rectangle(1,1): one step exits uniformly") {
  KernelSolver s(share(build_rectangle(1, 1)));
  double total = 0.0;
  for (Point y : s.domain().boundary()) {
    const double h = s.poisson_kernel(y)->values[0];
    CHECK(h == doctest::Approx(0.25).epsilon(1e-14));
    total += h;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("rectangle(2,1): hand-solved 2x2 system") {
  // Unknowns a = h(0,0), b = h(1,0) for y = (2,0):
  //   a - b/4 = 0,  b - a/4 = 1/4  =>  b = 4/15, a = 1/15.
  const double b = 0.25 / (1.0 - 1.0 / 16.0), a = b / 4.0;
  KernelSolver s(share(build_rectangle(2, 1)));
  const auto f = s.poisson_kernel({2, 0});
  const LatticeDomain& d = s.domain();
  CHECK(std::abs((*f)[static_cast<std::size_t>(d.site_id({0, 0}))] - a) < 1e-12);
  CHECK(std::abs((*f)[static_cast<std::size_t>(d.site_id({1, 0}))] - b) < 1e-12);
  CHECK(std::abs(a - 1.0 / 15.0) < 1e-15);
  CHECK(f->residual < 1e-12);
}

TEST_CASE("poisson kernel agrees with an iterative solve") {
  for (const LatticeDomain& dom : {build_rectangle(4, 3), build_scaled_disk(0.25),
                                   build_explicit({{0, 0}, {1, 0}, {2, 0}, {2, 1}, {2, 2}, {1, 2}})}) {
    KernelSolver s(share(dom));
    for (std::size_t k = 0; k < dom.boundary_size(); k += 3) {
      const Point y = dom.boundary()[k];
      const auto oracle = harmonic_oracle(dom, y);
      const auto f = s.poisson_kernel(y);
      for (std::size_t i = 0; i < oracle.size(); ++i) CHECK(std::abs(f->values[i] - oracle[i]) < 1e-10);
    }
  }
}

TEST_CASE("harmonic measure sums to one from every interior vertex") {
  KernelSolver s(share(build_rectangle(4, 4)));
  std::vector<double> total(s.domain().interior_size(), 0.0);
  for (Point y : s.domain().boundary()) {
    const auto f = s.poisson_kernel(y);
    for (std::size_t i = 0; i < total.size(); ++i) total[i] += f->values[i];
  }
  for (double t : total) CHECK(t == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("excursion kernel on rectangle(1,1)") {
  KernelSolver s(share(build_rectangle(1, 1)));
  CHECK(s.excursion_kernel({-1, 0}, {1, 0}) == doctest::Approx(1.0 / 16.0).epsilon(1e-14));
  CHECK(s.excursion_kernel({1, 0}, {1, 0}) == doctest::Approx(1.0 / 16.0).epsilon(1e-14));
}

TEST_CASE("excursion kernel is symmetric on rectangle(3,3)") {
  KernelSolver s(share(build_rectangle(3, 3)));
  for (Point x : s.domain().boundary())
    for (Point y : s.domain().boundary())
      CHECK(std::abs(s.excursion_kernel(x, y) - s.excursion_kernel(y, x)) < 1e-14);
}

TEST_CASE("non-boundary targets are rejected") {
  KernelSolver s(share(build_rectangle(3, 3)));
  CHECK_THROWS_AS(s.poisson_kernel({1, 1}), Error);
  CHECK_THROWS_AS(s.excursion_kernel({1, 1}, {-1, 0}), Error);
}

TEST_CASE("n = 1 hitting matrix") {
  KernelSolver s(share(build_rectangle(3, 3)));
  const MarkedBoundary m = validate_marks(s.domain(), {{-1, 1}, {3, 1}});
  const HittingMatrix h = hitting_matrix(s, m);
  CHECK(h.determinant() == doctest::Approx(s.excursion_kernel({-1, 1}, {3, 1})));
  CHECK(h.conditional_ratio() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(fomin_conditional_ratio(s, m) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("rectangle(1,1) forced intersection: every entry 1/16, det 0") {
  KernelSolver s(share(build_rectangle(1, 1)));
  const MarkedBoundary m = validate_marks(s.domain(), {{-1, 0}, {0, -1}, {1, 0}, {0, 1}});
  const HittingMatrix h = hitting_matrix(s, m);
  for (int i = 0; i < 2; ++i)
    for (int l = 0; l < 2; ++l) CHECK(h.entries(i, l) == doctest::Approx(1.0 / 16.0).epsilon(1e-14));
  CHECK(std::abs(h.determinant()) < 1e-17);
  CHECK(std::abs(h.conditional_ratio()) < 1e-15);
}

TEST_CASE("determinant and 2x2 closed form agree") {
  KernelSolver s(share(build_rectangle(5, 5)));
  const MarkedBoundary m = validate_marks(s.domain(), {{-1, 3}, {-1, 1}, {2, -1}, {4, -1}});
  const HittingMatrix h = hitting_matrix(s, m);
  const double a = s.excursion_kernel({-1, 3}, {4, -1}), b = s.excursion_kernel({-1, 3}, {2, -1});
  const double c = s.excursion_kernel({-1, 1}, {4, -1}), d = s.excursion_kernel({-1, 1}, {2, -1});
  CHECK(h.determinant() == doctest::Approx(a * d - b * c).epsilon(1e-12));
  CHECK(h.conditional_ratio() == doctest::Approx((a * d - b * c) / (a * d)).epsilon(1e-12));
}

TEST_CASE("det >= 0 for every counterclockwise 4-tuple on rectangle(4,4)") {
  KernelSolver s(share(build_rectangle(4, 4)));
  std::size_t tuples = 0, negative = 0;
  for_each_ccw_tuple(s.domain(), [&](std::vector<Point> marks) {
    ++tuples;
    if (hitting_matrix(s, validate_marks(s.domain(), std::move(marks))).determinant() < -1e-16) ++negative;
  });
  CHECK(tuples == 1820);
  CHECK(negative == 0);
}

TEST_CASE("conditional ratio lies in [0,1] on rectangle(5,5)") {
  KernelSolver s(share(build_rectangle(5, 5)));
  std::size_t bad = 0;
  for_each_ccw_tuple(s.domain(), [&](std::vector<Point> marks) {
    const double r = fomin_conditional_ratio(s, validate_marks(s.domain(), std::move(marks)));
    if (!(r >= -1e-12 && r <= 1.0 + 1e-12)) ++bad;
  });
  CHECK(bad == 0);
}

TEST_CASE("zero diagonal is reported") {
  // Lattice kernels between distinct marks are positive; set the zero by hand.
  HittingMatrix h;
  h.xs = {{0, 0}, {1, 0}};
  h.ys = {{0, 1}, {1, 1}};
  h.entries = Eigen::MatrixXd{{0.0, 1.0}, {1.0, 1.0}};
  CHECK(h.determinant() == doctest::Approx(-1.0));
  CHECK_THROWS_AS(h.conditional_ratio(), Error);
}

}  // TEST_SUITE
