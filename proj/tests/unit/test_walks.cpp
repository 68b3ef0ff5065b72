#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <set>

#include "fominlab/error.hpp"
#include "fominlab/walks.hpp"

using namespace fominlab;

namespace {

std::shared_ptr<const LatticeDomain> share(LatticeDomain d) {
  return std::make_shared<const LatticeDomain>(std::move(d));
}

LatticePath path(std::initializer_list<Point> v) { return LatticePath{std::vector<Point>(v)}; }

// Chronological erasure with a stack: on a revisit, pop back to the earlier copy.
LatticePath stack_erase(const LatticePath& p) {
  std::vector<Point> out;
  for (Point v : p.vertices) {
    const auto it = std::find(out.begin(), out.end(), v);
    if (it != out.end()) {
      out.erase(it + 1, out.end());
    } else {
      out.push_back(v);
    }
  }
  return LatticePath{out};
}

LatticePath free_walk(Engine& rng, int steps) {
  LatticePath p{{{0, 0}}};
  for (int k = 0; k < steps; ++k) p.vertices.push_back(p.vertices.back() + kSteps[uniform_direction(rng)]);
  return p;
}

// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return d;
}

}  // namespace

TEST_SUITE("walks") {

TEST_CASE("path predicates") {
  const LatticeDomain d = build_rectangle(1, 1);
  CHECK(is_nearest_neighbor_path(path({{-1, 0}, {0, 0}, {1, 0}})));
  CHECK_FALSE(is_nearest_neighbor_path(path({{-1, 0}, {1, 0}})));
  CHECK(is_excursion(path({{-1, 0}, {0, 0}, {1, 0}}), d));
  CHECK_FALSE(is_excursion(path({{-1, 0}, {0, 0}}), d));
  CHECK_FALSE(is_excursion(path({{-1, 0}, {0, 0}, {1, 0}, {0, 0}, {0, 1}}), d));
  CHECK(is_self_avoiding(path({{0, 0}, {1, 0}, {1, 1}})));
  CHECK_FALSE(is_self_avoiding(path({{0, 0}, {1, 0}, {0, 0}})));
}

TEST_CASE("loop erasure by hand") {
  CHECK(loop_erase(path({{0, 0}, {1, 0}, {0, 0}, {0, 1}})) == path({{0, 0}, {0, 1}}));
  const LatticePath sa = path({{0, 0}, {1, 0}, {1, 1}, {2, 1}});
  CHECK(loop_erase(sa) == sa);
  CHECK(loop_erase(path({{0, 0}})) == path({{0, 0}}));
  CHECK(loop_erase(path({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}})) == path({{0, 0}}));
}

TEST_CASE("loop erasure agrees with the stack construction and is idempotent") {
  Engine rng = make_stream(1, 0);
  LoopEraser eraser;
  for (int k = 0; k < 100000; ++k) {
    const LatticePath p = free_walk(rng, 1 + k % 40);
    const LatticePath l = loop_erase(p);
    REQUIRE(l == stack_erase(p));
    REQUIRE(loop_erase(l) == l);
    REQUIRE(eraser(p.vertices) == l.vertices);
    REQUIRE(is_self_avoiding(l));
    REQUIRE(is_nearest_neighbor_path(l));
    REQUIRE(l.front() == p.front());
    REQUIRE(l.back() == p.back());
  }
}

TEST_CASE("rectangle(1,1) excursions exit uniformly") {
  const LatticeDomain d = build_rectangle(1, 1);
  Engine rng = make_stream(2, 0);
  std::map<Point, int> exits;
  const int n = 100000;
  for (int k = 0; k < n; ++k) {
    const LatticePath p = sample_excursion(d, {-1, 0}, rng);
    REQUIRE(p.vertices.size() == 3);
    REQUIRE(p.vertices[1] == Point{0, 0});
    ++exits[p.back()];
  }
  REQUIRE(exits.size() == 4);
  const double sigma = std::sqrt(n * 0.25 * 0.75);
  for (const auto& [y, c] : exits) CHECK(std::abs(c - n * 0.25) < 4 * sigma);
}

TEST_CASE("exit frequencies match normalised excursion kernels on rectangle(3,3)") {
  auto dom = share(build_rectangle(3, 3));
  KernelSolver solver(dom);
  const Point x{-1, 1};
  double total = 0.0;
  for (Point y : dom->boundary()) total += solver.excursion_kernel(x, y);
  Engine rng = make_stream(3, 0);
  std::map<Point, int> exits;
  const int n = 100000;
  for (int k = 0; k < n; ++k) {
    const LatticePath p = sample_excursion(*dom, x, rng);
    REQUIRE(is_excursion(p, *dom));
    ++exits[p.back()];
  }
  for (Point y : dom->boundary()) {
    const double q = solver.excursion_kernel(x, y) / total;
    CHECK(std::abs(exits[y] - n * q) < 4 * std::sqrt(n * q * (1 - q)) + 1);
  }
}

TEST_CASE("uniform first step makes the free sampler unbiased for h_dA") {
  auto dom = share(build_rectangle(3, 3));
  KernelSolver solver(dom);
  const Point x{-1, 1}, y{3, 2};
  Engine rng = make_stream(4, 0);
  int hits = 0, failed = 0;
  const int n = 200000;
  for (int k = 0; k < n; ++k) {
    const auto p = try_sample_excursion(*dom, x, rng);
    if (!p) {
      ++failed;
    } else if (p->back() == y) {
      ++hits;
    }
  }
  const double h = solver.excursion_kernel(x, y);
  CHECK(std::abs(hits - n * h) < 4 * std::sqrt(n * h * (1 - h)));
  // Three of the four directions from a side vertex leave A.
  CHECK(std::abs(failed - n * 0.75) < 4 * std::sqrt(n * 0.75 * 0.25));
}

TEST_CASE("sampler preconditions") {
  const LatticeDomain d = build_rectangle(3, 3);
  Engine rng = make_stream(5, 0);
  CHECK_THROWS_AS(sample_excursion(d, {1, 1}, rng), Error);
  CHECK_THROWS_AS(sample_excursion(d, {-1, -1}, rng), Error);
}

TEST_CASE("conditioned walk on rectangle(1,1) has a single path") {
  auto dom = share(build_rectangle(1, 1));
  KernelSolver solver(dom);
  const ConditionedWalk walk(*dom, *solver.poisson_kernel({1, 0}));
  Engine rng = make_stream(6, 0);
  for (int k = 0; k < 1000; ++k) CHECK(walk.sample({-1, 0}, rng) == path({{-1, 0}, {0, 0}, {1, 0}}));
}

TEST_CASE("conditioned walk always exits at the target") {
  auto dom = share(build_scaled_disk(0.2));
  KernelSolver solver(dom);
  const Point y = dom->boundary()[7];
  const ConditionedWalk walk(*dom, *solver.poisson_kernel(y));
  Engine rng = make_stream(7, 0);
  for (int k = 0; k < 5000; ++k) {
    const LatticePath p = walk.sample(dom->boundary()[k % dom->boundary_size()], rng);
    REQUIRE(p.back() == y);
    REQUIRE(is_excursion(p, *dom));
  }
  for (std::size_t i = 0; i < dom->interior_size(); ++i) {
    const auto t = walk.transition(i);
    CHECK(t[0] + t[1] + t[2] + t[3] == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("conditioned lengths match rejection sampling (two-sample KS, level 0.01)") {
  auto dom = share(build_rectangle(3, 3));
  KernelSolver solver(dom);
  const Point x{-1, 1}, y{3, 2};
  const ConditionedWalk walk(*dom, *solver.poisson_kernel(y));
  Engine rng = make_stream(8, 0);
  const std::size_t n = 100000;
  std::vector<double> conditioned, rejected;
  while (conditioned.size() < n) conditioned.push_back(static_cast<double>(walk.sample(x, rng).length()));
  while (rejected.size() < n) {
    const LatticePath p = sample_excursion(*dom, x, rng);
    if (p.back() == y) rejected.push_back(static_cast<double>(p.length()));
  }
  const double d = ks_statistic(conditioned, rejected);
  const double critical = 1.628 * std::sqrt(2.0 / static_cast<double>(n));
  CHECK(d < critical);
}

TEST_CASE("tail swap by hand on rectangle(1,1)") {
  const LatticePath w1 = path({{-1, 0}, {0, 0}, {1, 0}});
  const LatticePath w2 = path({{0, -1}, {0, 0}, {0, 1}});
  const auto [a, b] = tail_swap(w1, w2);
  CHECK(a == path({{-1, 0}, {0, 0}, {0, 1}}));
  CHECK(b == path({{0, -1}, {0, 0}, {1, 0}}));
  const auto [c, d] = tail_swap_inverse(a, b);
  CHECK(c == w1);
  CHECK(d == w2);
}

TEST_CASE("tail swap needs an intersection") {
  const LatticePath w1 = path({{-1, 0}, {0, 0}, {1, 0}});
  const LatticePath w2 = path({{-1, 2}, {0, 2}, {1, 2}});
  CHECK_THROWS_AS(tail_swap(w1, w2), Error);
}

TEST_CASE("tail swap is a length-preserving involution on sampled pairs") {
  auto dom = share(build_rectangle(4, 4));
  Engine rng = make_stream(9, 0);
  std::size_t pairs = 0;
  while (pairs < 20000) {
    const LatticePath p = sample_excursion(*dom, {-1, 2}, rng);
    const LatticePath q = sample_excursion(*dom, {1, -1}, rng);
    // Exits must avoid both starting marks, as for paths x^i -> y^j.
    if (p.back() == q.front() || q.back() == p.front()) continue;
    const LatticePath lp = loop_erase(p);
    bool meet = false;
    const std::set<Point> qs(q.vertices.begin() + 1, q.vertices.end() - 1);
    for (std::size_t i = 1; i + 1 < lp.vertices.size() && !meet; ++i) meet = qs.count(lp.vertices[i]) > 0;
    if (!meet) continue;
    ++pairs;
    const auto [a, b] = tail_swap(p, q);
    REQUIRE(a.length() + b.length() == p.length() + q.length());
    REQUIRE(a.front() == p.front());
    REQUIRE(b.front() == q.front());
    REQUIRE(a.back() == q.back());
    REQUIRE(b.back() == p.back());
    REQUIRE(is_excursion(a, *dom));
    REQUIRE(is_excursion(b, *dom));
    const auto [c, d] = tail_swap_inverse(a, b);
    REQUIRE(c == p);
    REQUIRE(d == q);
  }
}

}  // TEST_SUITE
