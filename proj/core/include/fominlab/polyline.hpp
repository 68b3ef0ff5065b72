#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fominlab/mobius.hpp"

namespace fominlab {

double point_segment_distance(Complex p, Complex a, Complex b);

/// Closed segments [a1, a2] and [b1, b2] share a point (collinear overlap
/// included).
bool segments_intersect(Complex a1, Complex a2, Complex b1, Complex b2);

/// Uniform grid over the edges of a fixed polyline, for repeated proximity
/// queries by a second curve.
class EdgeGrid {
 public:
  EdgeGrid(std::span<const Complex> polyline, double cell_size);

  /// Segment [a, b] crosses some edge, or the vertex b lies within eps of one.
  bool touches(Complex a, Complex b, double eps) const;

  /// Vertex p lies within eps of some edge.
  bool near(Complex p, double eps) const;

 private:
  template <class Fn>
  bool any_edge(double x0, double y0, double x1, double y1, Fn&& fn) const;

  std::vector<Complex> vertices_;
  double cell_;
  double min_x_ = 0, min_y_ = 0, max_x_ = 0, max_y_ = 0;
  long nx_ = 0, ny_ = 0;
  std::vector<std::uint32_t> start_;  // CSR offsets per cell
  std::vector<std::uint32_t> edges_;
};

/// Number of pairs of non-adjacent segments of the polyline that intersect.
std::size_t self_intersection_count(std::span<const Complex> polyline);

}  // namespace fominlab
