#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace fominlab {

struct Point {
  int x = 0;
  int y = 0;

  friend auto operator<=>(const Point&, const Point&) = default;
  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
};

/// Unit steps in the fixed order east, north, west, south.
inline constexpr std::array<Point, 4> kSteps{{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}};

struct PointHash {
  std::size_t operator()(Point p) const noexcept {
    const auto ux = static_cast<std::uint64_t>(static_cast<std::uint32_t>(p.x));
    const auto uy = static_cast<std::uint64_t>(static_cast<std::uint32_t>(p.y));
    std::uint64_t h = (ux << 32) | uy;
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdULL;
    h ^= h >> 33;
    return static_cast<std::size_t>(h);
  }
};

/// Finite simply connected subset A of Z^2 together with its outer boundary
/// dA = { z not in A : |z - a| = 1 for some a in A }.
///
/// Every vertex is addressed by a dense site id: interior vertices occupy
/// [0, interior_size()) and boundary vertices [interior_size(), site_count()).
/// Both lists are sorted lexicographically. Immutable after construction.
class LatticeDomain {
 public:
  /// Validates non-emptiness, 4-connectivity of A and connectivity of the
  /// complement; throws Error(InvalidDomain) otherwise.
  static LatticeDomain from_interior(std::vector<Point> interior,
                                     std::optional<double> delta = std::nullopt);

  std::span<const Point> interior() const noexcept { return interior_; }
  std::span<const Point> boundary() const noexcept { return boundary_; }
  std::size_t interior_size() const noexcept { return interior_.size(); }
  std::size_t boundary_size() const noexcept { return boundary_.size(); }
  std::size_t site_count() const noexcept { return interior_.size() + boundary_.size(); }

  /// -1 when p is neither interior nor boundary.
  int site_id(Point p) const noexcept;
  Point site(int id) const noexcept;
  bool is_interior_site(int id) const noexcept {
    return id >= 0 && static_cast<std::size_t>(id) < interior_.size();
  }

  bool contains(Point p) const noexcept { return is_interior_site(site_id(p)); }
  bool on_boundary(Point p) const noexcept {
    const int id = site_id(p);
    return id >= 0 && !is_interior_site(id);
  }

  /// Site ids of the four neighbours of interior vertex `interior_index`, in
  /// kSteps order. Neighbours of interior vertices are always sites.
  const std::array<int, 4>& neighbors(std::size_t interior_index) const noexcept {
    return neighbors_[interior_index];
  }

  /// Interior indices adjacent to boundary vertex p (empty if p is not on dA).
  std::vector<int> interior_neighbors_of(Point p) const;

  /// Boundary vertices in the counterclockwise order they are met when walking
  /// the boundary edges of the union of unit squares centred on A. A vertex that
  /// touches A along separated stretches appears once per stretch.
  std::span<const Point> boundary_circuit() const noexcept { return circuit_; }

  std::optional<double> delta() const noexcept { return delta_; }

 private:
  LatticeDomain() = default;

  std::vector<Point> interior_;
  std::vector<Point> boundary_;
  std::vector<std::array<int, 4>> neighbors_;
  std::vector<Point> circuit_;
  std::optional<double> delta_;

  Point grid_origin_{};
  int grid_width_ = 0;
  int grid_height_ = 0;
  std::vector<int> grid_;
};

/// Recomputes dA from A using the definition (no caching).
std::vector<Point> outer_boundary(std::span<const Point> interior);

bool is_four_connected(std::span<const Point> points);

/// Complement flood fill over the bounding box padded by 2.
bool complement_is_connected(std::span<const Point> interior);

LatticeDomain build_rectangle(int width, int height);

/// Lattice approximation { z in Z^2 : |delta z| < 1 } of the unit disk.
LatticeDomain build_scaled_disk(double delta);

/// Upper half-disk { (i, j) : j >= 1, i^2 + j^2 < radius^2 } in lattice units;
/// its boundary contains the real-axis row j = 0.
LatticeDomain build_half_disk(double radius, std::optional<double> delta = std::nullopt);

LatticeDomain build_explicit(std::vector<Point> interior);

/// Boundary vertex v minimising |delta v - e^{i angle}|; ties go to the
/// lexicographically smaller (x, y).
Point mark_nearest_boundary(const LatticeDomain& domain, double delta, double angle);

/// Ordered boundary points x^1..x^n, y^n..y^1 that have been checked to be
/// distinct boundary vertices in counterclockwise cyclic order.
class MarkedBoundary {
 public:
  std::size_t n() const noexcept { return points_.size() / 2; }
  Point x(std::size_t i) const noexcept { return points_[i]; }
  Point y(std::size_t i) const noexcept { return points_[points_.size() - 1 - i]; }
  std::span<const Point> points() const noexcept { return points_; }

 private:
  friend MarkedBoundary validate_marks(const LatticeDomain&, std::vector<Point>);
  explicit MarkedBoundary(std::vector<Point> points) : points_(std::move(points)) {}
  std::vector<Point> points_;
};

/// Throws Error with NotOnBoundary, DuplicatePoint or WrongCyclicOrder.
/// An even, non-zero number of points is required.
MarkedBoundary validate_marks(const LatticeDomain& domain, std::vector<Point> points);

}  // namespace fominlab

template <>
struct std::hash<fominlab::Point> : fominlab::PointHash {};
