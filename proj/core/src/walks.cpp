#include "fominlab/walks.hpp"

#include <cstdlib>
#include <string>

#include "fominlab/error.hpp"

namespace fominlab {
namespace {

std::string to_string(Point p) {
  return "(" + std::to_string(p.x) + "," + std::to_string(p.y) + ")";
}

// Runs the walk from interior site `site` until it first leaves A, appending
// every visited vertex (including the exit vertex) to `out`.
void walk_until_exit(const LatticeDomain& domain, int site, Engine& rng, std::vector<Point>& out) {
  while (domain.is_interior_site(site)) {
    out.push_back(domain.site(site));
    site = domain.neighbors(static_cast<std::size_t>(site))[uniform_direction(rng)];
  }
  out.push_back(domain.site(site));
}

}  // namespace

bool is_nearest_neighbor_path(const LatticePath& path) {
  for (std::size_t i = 1; i < path.vertices.size(); ++i) {
    const Point a = path.vertices[i - 1], b = path.vertices[i];
    if (std::abs(a.x - b.x) + std::abs(a.y - b.y) != 1) return false;
  }
  return true;
}

bool is_excursion(const LatticePath& path, const LatticeDomain& domain) {
  if (path.vertices.size() < 3 || !is_nearest_neighbor_path(path)) return false;
  if (!domain.on_boundary(path.front()) || !domain.on_boundary(path.back())) return false;
  for (std::size_t i = 1; i + 1 < path.vertices.size(); ++i) {
    if (!domain.contains(path.vertices[i])) return false;
  }
  return true;
}

bool is_self_avoiding(const LatticePath& path) {
  std::unordered_set<Point> seen;
  for (const Point& p : path.vertices) {
    if (!seen.insert(p).second) return false;
  }
  return true;
}

std::optional<LatticePath> try_sample_excursion(const LatticeDomain& domain, Point x, Engine& rng) {
  if (!domain.on_boundary(x)) throw Error(ErrorCode::NoInteriorNeighbor, to_string(x));
  const int first = domain.site_id(x + kSteps[uniform_direction(rng)]);
  if (!domain.is_interior_site(first)) return std::nullopt;
  LatticePath path;
  path.vertices.push_back(x);
  walk_until_exit(domain, first, rng, path.vertices);
  return path;
}

LatticePath sample_excursion(const LatticeDomain& domain, Point x, Engine& rng) {
  const std::vector<int> entry = domain.interior_neighbors_of(x);
  if (entry.empty()) throw Error(ErrorCode::NoInteriorNeighbor, to_string(x));
  // Redrawing a uniform direction until it enters A is the same as drawing
  // uniformly among the interior neighbours.
  int first = -1;
  while (!domain.is_interior_site(first)) first = domain.site_id(x + kSteps[uniform_direction(rng)]);
  LatticePath path;
  path.vertices.push_back(x);
  walk_until_exit(domain, first, rng, path.vertices);
  return path;
}

ConditionedWalk::ConditionedWalk(const LatticeDomain& domain, const PoissonKernelField& field)
    : domain_(&domain),
      target_(field.target),
      target_site_(domain.site_id(field.target)),
      h_(field.values) {
  cdf_.resize(domain.interior_size());
  for (std::size_t z = 0; z < domain.interior_size(); ++z) {
    std::array<double, 4> w{};
    double total = 0.0;
    const auto& nb = domain.neighbors(z);
    for (std::size_t k = 0; k < 4; ++k) {
      if (domain.is_interior_site(nb[k])) {
        w[k] = h_[static_cast<std::size_t>(nb[k])];
      } else {
        w[k] = nb[k] == target_site_ ? 1.0 : 0.0;
      }
      total += w[k];
    }
    double acc = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
      acc += total > 0.0 ? w[k] / total : 0.0;
      cdf_[z][k] = acc;
    }
    cdf_[z][3] = total > 0.0 ? 1.0 : 0.0;
  }
}

std::array<double, 4> ConditionedWalk::transition(std::size_t interior_index) const {
  const auto& c = cdf_[interior_index];
  return {c[0], c[1] - c[0], c[2] - c[1], c[3] - c[2]};
}

LatticePath ConditionedWalk::sample(Point x, Engine& rng) const {
  const std::vector<int> entry = domain_->interior_neighbors_of(x);
  if (entry.empty()) throw Error(ErrorCode::NoInteriorNeighbor, to_string(x));
  double total = 0.0;
  for (int w : entry) total += h_[static_cast<std::size_t>(w)];
  if (!(total > 0.0)) {
    throw Error(ErrorCode::ImpossibleConditioning,
                "h_dA(" + to_string(x) + ", " + to_string(target_) + ") = 0");
  }

  const double u = uniform01(rng) * total;
  double acc = 0.0;
  int site = entry.back();
  for (int w : entry) {
    acc += h_[static_cast<std::size_t>(w)];
    if (u < acc) {
      site = w;
      break;
    }
  }

  LatticePath path;
  path.vertices.push_back(x);
  while (domain_->is_interior_site(site)) {
    const auto z = static_cast<std::size_t>(site);
    path.vertices.push_back(domain_->interior()[z]);
    const double v = uniform01(rng);
    const auto& c = cdf_[z];
    std::size_t k = 0;
    while (k < 3 && !(v < c[k])) ++k;
    // Skip zero-probability directions that round-off could land on.
    while (k < 3 && (k == 0 ? c[0] : c[k] - c[k - 1]) <= 0.0) ++k;
    site = domain_->neighbors(z)[k];
  }
  path.vertices.push_back(domain_->site(site));
  return path;
}

const std::vector<Point>& LoopEraser::operator()(const std::vector<Point>& path) {
  last_visit_.clear();
  erased_.clear();
  if (path.empty()) return erased_;
  for (std::size_t j = 0; j < path.size(); ++j) last_visit_[path[j]] = j;
  const std::size_t k = path.size() - 1;
  std::size_t s = last_visit_[path[0]];
  erased_.push_back(path[s]);
  while (s != k) {
    s = last_visit_[path[s + 1]];
    erased_.push_back(path[s]);
  }
  return erased_;
}

LatticePath loop_erase(const LatticePath& path) {
  LoopEraser eraser;
  return LatticePath{eraser(path.vertices)};
}

std::pair<LatticePath, LatticePath> tail_swap(const LatticePath& first, const LatticePath& second) {
  const auto& z = first.vertices;
  const auto& w = second.vertices;
  if (z.size() < 3 || w.size() < 3) {
    throw Error(ErrorCode::NoIntersection, "paths must have interior vertices");
  }
  const LatticePath erased = loop_erase(first);
  const std::unordered_set<Point> second_interior(w.begin() + 1, w.end() - 1);

  const Point* pivot = nullptr;
  for (std::size_t j = 1; j + 1 < erased.vertices.size(); ++j) {
    if (second_interior.contains(erased.vertices[j])) {
      pivot = &erased.vertices[j];
      break;
    }
  }
  if (pivot == nullptr) throw Error(ErrorCode::NoIntersection, "L(first) does not meet second");

  std::size_t l1 = 0, l2 = 0;
  for (std::size_t l = 1; l + 1 < z.size(); ++l)
    if (z[l] == *pivot) l1 = l;
  for (std::size_t l = 1; l + 1 < w.size(); ++l)
    if (w[l] == *pivot) l2 = l;

  LatticePath a, b;
  a.vertices.assign(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(l1) + 1);
  a.vertices.insert(a.vertices.end(), w.begin() + static_cast<std::ptrdiff_t>(l2) + 1, w.end());
  b.vertices.assign(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(l2) + 1);
  b.vertices.insert(b.vertices.end(), z.begin() + static_cast<std::ptrdiff_t>(l1) + 1, z.end());
  return {std::move(a), std::move(b)};
}

std::pair<LatticePath, LatticePath> tail_swap_inverse(const LatticePath& first,
                                                      const LatticePath& second) {
  return tail_swap(first, second);
}

}  // namespace fominlab
