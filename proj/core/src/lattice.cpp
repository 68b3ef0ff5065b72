#include "fominlab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <tuple>
#include <unordered_set>

#include "fominlab/error.hpp"

namespace fominlab {
namespace {

std::string to_string(Point p) {
  return "(" + std::to_string(p.x) + "," + std::to_string(p.y) + ")";
}

struct BoundingBox {
  int min_x, min_y, max_x, max_y;
};

BoundingBox bounds_of(std::span<const Point> pts) {
  BoundingBox b{std::numeric_limits<int>::max(), std::numeric_limits<int>::max(),
                std::numeric_limits<int>::min(), std::numeric_limits<int>::min()};
  for (const Point& p : pts) {
    b.min_x = std::min(b.min_x, p.x);
    b.min_y = std::min(b.min_y, p.y);
    b.max_x = std::max(b.max_x, p.x);
    b.max_y = std::max(b.max_y, p.y);
  }
  return b;
}

// Directed edges of the unit squares centred on interior points, oriented so
// that the square lies on the left. Corner (cx, cy) is the geometric point
// (cx - 1/2, cy - 1/2).
struct CircuitEdge {
  Point from;
  Point to;
  int direction;  // index into kSteps
  Point exterior;
};

std::vector<Point> walk_boundary_circuit(std::span<const Point> interior,
                                         const std::unordered_set<Point>& in_a) {
  std::vector<CircuitEdge> edges;
  for (const Point& p : interior) {
    const Point ll{p.x, p.y}, lr{p.x + 1, p.y}, ur{p.x + 1, p.y + 1}, ul{p.x, p.y + 1};
    const CircuitEdge candidates[4] = {
        {ll, lr, 0, {p.x, p.y - 1}},
        {lr, ur, 1, {p.x + 1, p.y}},
        {ur, ul, 2, {p.x, p.y + 1}},
        {ul, ll, 3, {p.x - 1, p.y}},
    };
    for (const auto& e : candidates) {
      if (!in_a.contains(e.exterior)) edges.push_back(e);
    }
  }
  std::sort(edges.begin(), edges.end(), [](const CircuitEdge& a, const CircuitEdge& b) {
    return std::tie(a.from, a.direction) < std::tie(b.from, b.direction);
  });

  std::map<Point, std::vector<std::size_t>> outgoing;
  for (std::size_t i = 0; i < edges.size(); ++i) outgoing[edges[i].from].push_back(i);

  std::vector<char> used(edges.size(), 0);
  std::vector<Point> circuit;
  std::size_t current = 0;
  std::size_t visited = 0;
  while (!used[current]) {
    used[current] = 1;
    ++visited;
    const CircuitEdge& e = edges[current];
    if (circuit.empty() || circuit.back() != e.exterior) circuit.push_back(e.exterior);
    const auto& next = outgoing[e.to];
    // A pinch corner has two outgoing edges; turning left keeps squares that
    // only share a corner apart, as 4-adjacency requires.
    std::size_t chosen = next.front();
    if (next.size() > 1) {
      const int left = (e.direction + 1) % 4;
      for (std::size_t cand : next) {
        if (edges[cand].direction == left) chosen = cand;
      }
    }
    current = chosen;
  }
  if (visited != edges.size()) {
    throw Error(ErrorCode::InvalidDomain, "boundary edges do not form a single circuit");
  }
  if (circuit.size() > 1 && circuit.front() == circuit.back()) circuit.pop_back();
  return circuit;
}

}  // namespace

std::vector<Point> outer_boundary(std::span<const Point> interior) {
  std::unordered_set<Point> in_a(interior.begin(), interior.end());
  std::unordered_set<Point> seen;
  std::vector<Point> out;
  for (const Point& p : interior) {
    for (const Point& s : kSteps) {
      const Point q = p + s;
      if (!in_a.contains(q) && seen.insert(q).second) out.push_back(q);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool is_four_connected(std::span<const Point> points) {
  if (points.empty()) return false;
  std::unordered_set<Point> remaining(points.begin(), points.end());
  std::vector<Point> stack{points.front()};
  remaining.erase(points.front());
  while (!stack.empty()) {
    const Point p = stack.back();
    stack.pop_back();
    for (const Point& s : kSteps) {
      const Point q = p + s;
      if (remaining.erase(q) > 0) stack.push_back(q);
    }
  }
  return remaining.empty();
}

bool complement_is_connected(std::span<const Point> interior) {
  if (interior.empty()) return false;
  BoundingBox b = bounds_of(interior);
  b.min_x -= 2;
  b.min_y -= 2;
  b.max_x += 2;
  b.max_y += 2;
  const int w = b.max_x - b.min_x + 1;
  const int h = b.max_y - b.min_y + 1;
  std::vector<char> blocked(static_cast<std::size_t>(w) * h, 0);
  auto idx = [&](int x, int y) {
    return static_cast<std::size_t>(y - b.min_y) * w + static_cast<std::size_t>(x - b.min_x);
  };
  for (const Point& p : interior) blocked[idx(p.x, p.y)] = 1;
  const std::size_t free_cells = blocked.size() - interior.size();

  std::vector<char> reached(blocked.size(), 0);
  std::vector<Point> stack{{b.min_x, b.min_y}};
  reached[idx(b.min_x, b.min_y)] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    const Point p = stack.back();
    stack.pop_back();
    for (const Point& s : kSteps) {
      const Point q = p + s;
      if (q.x < b.min_x || q.x > b.max_x || q.y < b.min_y || q.y > b.max_y) continue;
      const std::size_t i = idx(q.x, q.y);
      if (blocked[i] || reached[i]) continue;
      reached[i] = 1;
      ++count;
      stack.push_back(q);
    }
  }
  return count == free_cells;
}

LatticeDomain LatticeDomain::from_interior(std::vector<Point> interior,
                                           std::optional<double> delta) {
  std::sort(interior.begin(), interior.end());
  interior.erase(std::unique(interior.begin(), interior.end()), interior.end());
  if (interior.empty()) throw Error(ErrorCode::InvalidDomain, "interior is empty");
  if (!is_four_connected(interior)) {
    throw Error(ErrorCode::InvalidDomain, "interior is not 4-connected");
  }
  if (!complement_is_connected(interior)) {
    throw Error(ErrorCode::InvalidDomain, "complement is not connected (domain has a hole)");
  }

  LatticeDomain d;
  d.delta_ = delta;
  d.interior_ = std::move(interior);
  d.boundary_ = outer_boundary(d.interior_);

  BoundingBox b = bounds_of(d.boundary_);
  d.grid_origin_ = {b.min_x, b.min_y};
  d.grid_width_ = b.max_x - b.min_x + 1;
  d.grid_height_ = b.max_y - b.min_y + 1;
  d.grid_.assign(static_cast<std::size_t>(d.grid_width_) * d.grid_height_, -1);
  auto cell = [&](Point p) -> int& {
    return d.grid_[static_cast<std::size_t>(p.y - b.min_y) * d.grid_width_ +
                   static_cast<std::size_t>(p.x - b.min_x)];
  };
  const int n_int = static_cast<int>(d.interior_.size());
  for (int i = 0; i < n_int; ++i) cell(d.interior_[i]) = i;
  for (int i = 0; i < static_cast<int>(d.boundary_.size()); ++i) cell(d.boundary_[i]) = n_int + i;

  d.neighbors_.resize(d.interior_.size());
  for (std::size_t i = 0; i < d.interior_.size(); ++i) {
    for (std::size_t k = 0; k < 4; ++k) d.neighbors_[i][k] = cell(d.interior_[i] + kSteps[k]);
  }

  std::unordered_set<Point> in_a(d.interior_.begin(), d.interior_.end());
  d.circuit_ = walk_boundary_circuit(d.interior_, in_a);
  return d;
}

int LatticeDomain::site_id(Point p) const noexcept {
  const int gx = p.x - grid_origin_.x;
  const int gy = p.y - grid_origin_.y;
  if (gx < 0 || gy < 0 || gx >= grid_width_ || gy >= grid_height_) return -1;
  return grid_[static_cast<std::size_t>(gy) * grid_width_ + static_cast<std::size_t>(gx)];
}

Point LatticeDomain::site(int id) const noexcept {
  const auto u = static_cast<std::size_t>(id);
  return u < interior_.size() ? interior_[u] : boundary_[u - interior_.size()];
}

std::vector<int> LatticeDomain::interior_neighbors_of(Point p) const {
  std::vector<int> out;
  if (!on_boundary(p)) return out;
  for (const Point& s : kSteps) {
    const int id = site_id(p + s);
    if (is_interior_site(id)) out.push_back(id);
  }
  return out;
}

LatticeDomain build_rectangle(int width, int height) {
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::InvalidArgument, "rectangle dimensions must be positive");
  }
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(width) * height);
  for (int x = 0; x < width; ++x)
    for (int y = 0; y < height; ++y) pts.push_back({x, y});
  return LatticeDomain::from_interior(std::move(pts));
}

LatticeDomain build_scaled_disk(double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw Error(ErrorCode::InvalidArgument, "delta must be a positive finite number");
  }
  const int r = static_cast<int>(std::floor(1.0 / delta)) + 1;
  std::vector<Point> pts;
  for (int x = -r; x <= r; ++x) {
    for (int y = -r; y <= r; ++y) {
      const double dx = delta * x, dy = delta * y;
      if (dx * dx + dy * dy < 1.0) pts.push_back({x, y});
    }
  }
  return LatticeDomain::from_interior(std::move(pts), delta);
}

LatticeDomain build_half_disk(double radius, std::optional<double> delta) {
  if (!(radius > 1.0) || !std::isfinite(radius)) {
    throw Error(ErrorCode::InvalidArgument, "half-disk radius must exceed 1");
  }
  const int r = static_cast<int>(std::ceil(radius));
  std::vector<Point> pts;
  const double r2 = radius * radius;
  for (int x = -r; x <= r; ++x) {
    for (int y = 1; y <= r; ++y) {
      if (static_cast<double>(x) * x + static_cast<double>(y) * y < r2) pts.push_back({x, y});
    }
  }
  return LatticeDomain::from_interior(std::move(pts), delta);
}

LatticeDomain build_explicit(std::vector<Point> interior) {
  return LatticeDomain::from_interior(std::move(interior));
}

Point mark_nearest_boundary(const LatticeDomain& domain, double delta, double angle) {
  const double tx = std::cos(angle), ty = std::sin(angle);
  const auto boundary = domain.boundary();
  Point best = boundary.front();
  double best_d2 = std::numeric_limits<double>::infinity();
  // boundary() is sorted, so scanning in order and replacing only on a strict
  // improvement implements the lexicographic tie-break.
  for (const Point& v : boundary) {
    const double dx = delta * v.x - tx, dy = delta * v.y - ty;
    const double d2 = dx * dx + dy * dy;
    if (d2 < best_d2 - 1e-12) {
      best_d2 = d2;
      best = v;
    }
  }
  return best;
}

MarkedBoundary validate_marks(const LatticeDomain& domain, std::vector<Point> points) {
  if (points.empty() || points.size() % 2 != 0) {
    throw Error(ErrorCode::InvalidArgument, "marks must be a non-empty even-length list");
  }
  for (const Point& p : points) {
    if (!domain.on_boundary(p)) throw Error(ErrorCode::NotOnBoundary, to_string(p));
  }
  {
    std::unordered_set<Point> seen;
    for (const Point& p : points) {
      if (!seen.insert(p).second) throw Error(ErrorCode::DuplicatePoint, to_string(p));
    }
  }

  // Greedy earliest matching decides whether the marks occur as a cyclic
  // subsequence of the circuit; each occurrence of the first mark is tried as
  // the starting position.
  const auto circuit = domain.boundary_circuit();
  const std::size_t len = circuit.size();
  bool ordered = false;
  for (std::size_t start = 0; start < len && !ordered; ++start) {
    if (circuit[start] != points.front()) continue;
    std::size_t matched = 1;
    for (std::size_t step = 1; step < len && matched < points.size(); ++step) {
      if (circuit[(start + step) % len] == points[matched]) ++matched;
    }
    ordered = matched == points.size();
  }
  if (!ordered) {
    throw Error(ErrorCode::WrongCyclicOrder, "marks are not in counterclockwise boundary order");
  }
  return MarkedBoundary(std::move(points));
}

}  // namespace fominlab
