#include "fominlab/polyline.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "fominlab/error.hpp"

namespace fominlab {
namespace {

double cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

int orientation(Complex a, Complex b, Complex c) {
  const double v = cross(b - a, c - a);
  if (v > 0.0) return 1;
  if (v < 0.0) return -1;
  return 0;
}

bool on_segment(Complex a, Complex b, Complex p) {
  return std::min(a.real(), b.real()) <= p.real() && p.real() <= std::max(a.real(), b.real()) &&
         std::min(a.imag(), b.imag()) <= p.imag() && p.imag() <= std::max(a.imag(), b.imag());
}

}  // namespace

double point_segment_distance(Complex p, Complex a, Complex b) {
  const Complex ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(p - a);
  const double t = std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
  return std::abs(p - (a + t * ab));
}

bool segments_intersect(Complex a1, Complex a2, Complex b1, Complex b2) {
  const int o1 = orientation(a1, a2, b1);
  const int o2 = orientation(a1, a2, b2);
  const int o3 = orientation(b1, b2, a1);
  const int o4 = orientation(b1, b2, a2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a1, a2, b1)) return true;
  if (o2 == 0 && on_segment(a1, a2, b2)) return true;
  if (o3 == 0 && on_segment(b1, b2, a1)) return true;
  if (o4 == 0 && on_segment(b1, b2, a2)) return true;
  return false;
}

EdgeGrid::EdgeGrid(std::span<const Complex> polyline, double cell_size)
    : vertices_(polyline.begin(), polyline.end()), cell_(cell_size) {
  if (vertices_.size() < 2 || !(cell_ > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "edge grid needs >= 2 vertices and cell > 0");
  }
  min_x_ = max_x_ = vertices_[0].real();
  min_y_ = max_y_ = vertices_[0].imag();
  for (const Complex& v : vertices_) {
    min_x_ = std::min(min_x_, v.real());
    max_x_ = std::max(max_x_, v.real());
    min_y_ = std::min(min_y_, v.imag());
    max_y_ = std::max(max_y_, v.imag());
  }
  nx_ = static_cast<long>(std::floor((max_x_ - min_x_) / cell_)) + 1;
  ny_ = static_cast<long>(std::floor((max_y_ - min_y_) / cell_)) + 1;

  auto cells_of = [&](std::size_t e, auto&& emit) {
    const Complex a = vertices_[e], b = vertices_[e + 1];
    const long i0 = static_cast<long>((std::min(a.real(), b.real()) - min_x_) / cell_);
    const long i1 = static_cast<long>((std::max(a.real(), b.real()) - min_x_) / cell_);
    const long j0 = static_cast<long>((std::min(a.imag(), b.imag()) - min_y_) / cell_);
    const long j1 = static_cast<long>((std::max(a.imag(), b.imag()) - min_y_) / cell_);
    for (long i = i0; i <= std::min(i1, nx_ - 1); ++i)
      for (long j = j0; j <= std::min(j1, ny_ - 1); ++j) emit(static_cast<std::size_t>(i * ny_ + j));
  };
  const auto n_cells = static_cast<std::size_t>(nx_ * ny_);
  start_.assign(n_cells + 1, 0);
  for (std::size_t e = 0; e + 1 < vertices_.size(); ++e)
    cells_of(e, [&](std::size_t cell) { ++start_[cell + 1]; });
  for (std::size_t c = 0; c < n_cells; ++c) start_[c + 1] += start_[c];
  edges_.resize(start_.back());
  std::vector<std::uint32_t> fill(start_.begin(), start_.end() - 1);
  for (std::size_t e = 0; e + 1 < vertices_.size(); ++e)
    cells_of(e, [&](std::size_t cell) { edges_[fill[cell]++] = static_cast<std::uint32_t>(e); });
}

template <class Fn>
bool EdgeGrid::any_edge(double x0, double y0, double x1, double y1, Fn&& fn) const {
  if (x1 < min_x_ || x0 > max_x_ || y1 < min_y_ || y0 > max_y_) return false;
  const long i0 = std::max(0L, static_cast<long>(std::floor((x0 - min_x_) / cell_)));
  const long i1 = std::min(nx_ - 1, static_cast<long>(std::floor((x1 - min_x_) / cell_)));
  const long j0 = std::max(0L, static_cast<long>(std::floor((y0 - min_y_) / cell_)));
  const long j1 = std::min(ny_ - 1, static_cast<long>(std::floor((y1 - min_y_) / cell_)));
  for (long i = i0; i <= i1; ++i) {
    for (long j = j0; j <= j1; ++j) {
      const auto cell = static_cast<std::size_t>(i * ny_ + j);
      for (std::uint32_t k = start_[cell]; k < start_[cell + 1]; ++k) {
        if (fn(vertices_[edges_[k]], vertices_[edges_[k] + 1])) return true;
      }
    }
  }
  return false;
}

bool EdgeGrid::touches(Complex a, Complex b, double eps) const {
  return any_edge(std::min(a.real(), b.real()) - eps, std::min(a.imag(), b.imag()) - eps,
                  std::max(a.real(), b.real()) + eps, std::max(a.imag(), b.imag()) + eps,
                  [&](Complex e0, Complex e1) {
                    return segments_intersect(a, b, e0, e1) ||
                           point_segment_distance(b, e0, e1) <= eps;
                  });
}

bool EdgeGrid::near(Complex p, double eps) const {
  return any_edge(p.real() - eps, p.imag() - eps, p.real() + eps, p.imag() + eps,
                  [&](Complex e0, Complex e1) { return point_segment_distance(p, e0, e1) <= eps; });
}

std::size_t self_intersection_count(std::span<const Complex> polyline) {
  const std::size_t n = polyline.size();
  if (n < 4) return 0;
  double min_x = polyline[0].real(), max_x = min_x, min_y = polyline[0].imag(), max_y = min_y;
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const Complex v = polyline[k];
    min_x = std::min(min_x, v.real());
    max_x = std::max(max_x, v.real());
    min_y = std::min(min_y, v.imag());
    max_y = std::max(max_y, v.imag());
    if (k + 1 < n) total += std::abs(polyline[k + 1] - v);
  }
  // Cells a few mean segments wide, capped at about 4n cells.
  const double span = std::max(max_x - min_x, max_y - min_y);
  const double cell = std::max(4.0 * total / static_cast<double>(n - 1),
                               span / (2.0 * std::sqrt(static_cast<double>(n))));
  if (!(cell > 0.0)) return 0;
  const long nx = static_cast<long>((max_x - min_x) / cell) + 1;
  const long ny = static_cast<long>((max_y - min_y) / cell) + 1;
  auto cell_range = [&](Complex a, Complex b) {
    return std::array<long, 4>{
        static_cast<long>((std::min(a.real(), b.real()) - min_x) / cell),
        std::min(nx - 1, static_cast<long>((std::max(a.real(), b.real()) - min_x) / cell)),
        static_cast<long>((std::min(a.imag(), b.imag()) - min_y) / cell),
        std::min(ny - 1, static_cast<long>((std::max(a.imag(), b.imag()) - min_y) / cell))};
  };

  std::vector<std::vector<std::uint32_t>> cells(static_cast<std::size_t>(nx * ny));
  for (std::size_t e = 0; e + 1 < n; ++e) {
    const auto r = cell_range(polyline[e], polyline[e + 1]);
    for (long i = r[0]; i <= r[1]; ++i)
      for (long j = r[2]; j <= r[3]; ++j)
        cells[static_cast<std::size_t>(i * ny + j)].push_back(static_cast<std::uint32_t>(e));
  }

  std::vector<std::size_t> seen(n, static_cast<std::size_t>(-1));
  std::size_t count = 0;
  for (std::size_t e = 0; e + 1 < n; ++e) {
    const Complex a = polyline[e], b = polyline[e + 1];
    const auto r = cell_range(a, b);
    for (long i = r[0]; i <= r[1]; ++i) {
      for (long j = r[2]; j <= r[3]; ++j) {
        for (std::uint32_t f : cells[static_cast<std::size_t>(i * ny + j)]) {
          // Later, non-adjacent segments only; each pair counted once.
          if (f < e + 2 || seen[f] == e) continue;
          seen[f] = e;
          if (segments_intersect(a, b, polyline[f], polyline[f + 1])) ++count;
        }
      }
    }
  }
  return count;
}

}  // namespace fominlab
