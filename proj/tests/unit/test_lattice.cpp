#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "fominlab/error.hpp"
#include "fominlab/lattice.hpp"

using namespace fominlab;

namespace {

// Direct enumeration of the outer boundary, independent of the library.
std::set<Point> boundary_oracle(const std::vector<Point>& interior) {
  std::set<Point> in(interior.begin(), interior.end()), out;
  for (Point p : interior) {
    for (Point s : kSteps) {
      const Point q = p + s;
      if (!in.count(q)) out.insert(q);
    }
  }
  return out;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidArgument;
}

double shoelace(std::span<const Point> loop) {
  double area = 0;
  for (std::size_t i = 0; i < loop.size(); ++i) {
    const Point a = loop[i], b = loop[(i + 1) % loop.size()];
    area += static_cast<double>(a.x) * b.y - static_cast<double>(b.x) * a.y;
  }
  return area / 2;
}

}  // namespace

TEST_SUITE("lattice") {

TEST_CASE("rectangle(1,1) has one interior vertex and four boundary vertices") {
  const LatticeDomain d = build_rectangle(1, 1);
  REQUIRE(d.interior_size() == 1);
  CHECK(d.interior()[0] == Point{0, 0});
  const std::set<Point> b(d.boundary().begin(), d.boundary().end());
  CHECK(b == std::set<Point>{{1, 0}, {-1, 0}, {0, 1}, {0, -1}});
}

TEST_CASE("rectangle sizes") {
  CHECK(build_rectangle(2, 1).interior_size() == 2);
  CHECK(build_rectangle(2, 1).boundary_size() == 6);
  CHECK(build_rectangle(3, 3).boundary_size() == 12);
  CHECK(build_rectangle(6, 6).boundary_size() == 24);
}

TEST_CASE("boundary matches direct enumeration on several shapes") {
  std::vector<std::vector<Point>> shapes = {
      {{0, 0}, {1, 0}, {2, 0}, {2, 1}, {2, 2}},              // L
      {{0, 0}, {1, 0}, {1, 1}, {1, 2}, {0, 2}, {-1, 2}},     // hook
      {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {-1, 1}},             // plus
  };
  for (const auto& s : shapes) {
    const LatticeDomain d = build_explicit(s);
    const std::set<Point> got(d.boundary().begin(), d.boundary().end());
    CHECK(got == boundary_oracle(s));
    const auto recomputed = outer_boundary(s);
    CHECK(std::set<Point>(recomputed.begin(), recomputed.end()) == got);
  }
}

TEST_CASE("site ids are dense and consistent") {
  const LatticeDomain d = build_rectangle(4, 3);
  for (int id = 0; id < static_cast<int>(d.site_count()); ++id) CHECK(d.site_id(d.site(id)) == id);
  CHECK(d.site_id({100, 100}) == -1);
  CHECK(d.contains({0, 0}));
  CHECK(d.on_boundary({-1, 0}));
  CHECK_FALSE(d.on_boundary({-1, -1}));  // corners are not adjacent to A
}

TEST_CASE("neighbors follow the east-north-west-south order") {
  const LatticeDomain d = build_rectangle(3, 3);
  const int c = d.site_id({1, 1});
  const auto& nb = d.neighbors(static_cast<std::size_t>(c));
  for (int k = 0; k < 4; ++k) CHECK(d.site(nb[k]) == Point{1, 1} + kSteps[k]);
}

TEST_CASE("scaled disk uses the strict inequality |delta z| < 1") {
  auto count = [](double delta) {
    std::size_t n = 0;
    const int r = static_cast<int>(std::ceil(1.0 / delta)) + 1;
    for (int i = -r; i <= r; ++i)
      for (int j = -r; j <= r; ++j)
        if (std::hypot(delta * i, delta * j) < 1.0) ++n;
    return n;
  };
  CHECK(build_scaled_disk(0.9).interior_size() == 5);
  CHECK(build_scaled_disk(0.5).interior_size() == 9);
  CHECK(build_scaled_disk(1.5).interior_size() == 1);
  for (double delta : {0.3, 0.1, 0.07, 0.025}) {
    CHECK(build_scaled_disk(delta).interior_size() == count(delta));
  }
  CHECK(code_of([] { build_scaled_disk(0.0); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { build_scaled_disk(-1.0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("nearest boundary marks on the delta = 0.5 disk") {
  const LatticeDomain d = build_scaled_disk(0.5);
  CHECK(mark_nearest_boundary(d, 0.5, 0.0) == Point{2, 0});
  CHECK(mark_nearest_boundary(d, 0.5, M_PI / 2) == Point{0, 2});
  CHECK(mark_nearest_boundary(d, 0.5, M_PI) == Point{-2, 0});
  CHECK(mark_nearest_boundary(d, 0.5, 3 * M_PI / 2) == Point{0, -2});
}

TEST_CASE("half-disk boundary contains the real-axis row") {
  const LatticeDomain d = build_half_disk(10.0);
  for (int i = -9; i <= 9; ++i) CHECK(d.on_boundary({i, 0}));
  for (Point p : d.interior()) {
    CHECK(p.y >= 1);
    CHECK(p.x * p.x + p.y * p.y < 100);
  }
}

TEST_CASE("invalid domains are rejected") {
  CHECK(code_of([] { build_explicit({}); }) == ErrorCode::InvalidDomain);
  CHECK(code_of([] { build_explicit({{0, 0}, {2, 0}}); }) == ErrorCode::InvalidDomain);
  // Ring around (1,1).
  std::vector<Point> ring;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != 1 || j != 1) ring.push_back({i, j});
  CHECK(code_of([&] { build_explicit(ring); }) == ErrorCode::InvalidDomain);
  CHECK(code_of([] { build_rectangle(0, 3); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("boundary circuit visits every boundary vertex counterclockwise") {
  for (const LatticeDomain& d : {build_rectangle(3, 3), build_rectangle(5, 2), build_scaled_disk(0.2),
                                 build_explicit({{0, 0}, {1, 0}, {2, 0}, {2, 1}, {2, 2}})}) {
    const auto c = d.boundary_circuit();
    const std::set<Point> seen(c.begin(), c.end());
    CHECK(seen == std::set<Point>(d.boundary().begin(), d.boundary().end()));
    CHECK(shoelace(c) > 0.0);
  }
}

TEST_CASE("validate_marks") {
  const LatticeDomain d = build_rectangle(3, 3);
  // East side upwards, then west side downwards: counterclockwise.
  const std::vector<Point> ccw{{3, 0}, {3, 2}, {-1, 2}, {-1, 0}};
  const MarkedBoundary m = validate_marks(d, ccw);
  CHECK(m.n() == 2);
  CHECK(m.x(0) == Point{3, 0});
  CHECK(m.x(1) == Point{3, 2});
  CHECK(m.y(1) == Point{-1, 2});
  CHECK(m.y(0) == Point{-1, 0});

  // Any rotation of a counterclockwise list is still counterclockwise.
  for (std::size_t r = 1; r < ccw.size(); ++r) {
    std::vector<Point> rot = ccw;
    std::rotate(rot.begin(), rot.begin() + static_cast<long>(r), rot.end());
    CHECK_NOTHROW(validate_marks(d, rot));
  }

  const std::vector<Point> clockwise{{-1, 0}, {-1, 2}, {3, 2}, {3, 0}};
  CHECK(code_of([&] { validate_marks(d, clockwise); }) == ErrorCode::WrongCyclicOrder);
  CHECK(code_of([&] { validate_marks(d, {{3, 0}, {3, 0}, {-1, 2}, {-1, 0}}); }) ==
        ErrorCode::DuplicatePoint);
  CHECK(code_of([&] { validate_marks(d, {{1, 1}, {3, 2}}); }) == ErrorCode::NotOnBoundary);
  CHECK(code_of([&] { validate_marks(d, {{3, 0}, {3, 2}, {-1, 2}}); }) ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("validate_marks on rectangle(1,1) around the single site") {
  const LatticeDomain d = build_rectangle(1, 1);
  // West, south, east, north is the counterclockwise order.
  CHECK_NOTHROW(validate_marks(d, {{-1, 0}, {0, -1}, {1, 0}, {0, 1}}));
  CHECK(code_of([&] { validate_marks(d, {{-1, 0}, {0, -1}, {0, 1}, {1, 0}}); }) ==
        ErrorCode::WrongCyclicOrder);
}

}  // TEST_SUITE
