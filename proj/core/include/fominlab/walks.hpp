#pragma once

#include <array>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "fominlab/kernel.hpp"
#include "fominlab/lattice.hpp"
#include "fominlab/rng.hpp"

namespace fominlab {

/// Ordered vertex sequence omega_0..omega_k; its excursion weight is 4^{-k}.
struct LatticePath {
  std::vector<Point> vertices;

  std::size_t length() const noexcept { return vertices.empty() ? 0 : vertices.size() - 1; }
  Point front() const { return vertices.front(); }
  Point back() const { return vertices.back(); }
  friend bool operator==(const LatticePath&, const LatticePath&) = default;
};

/// Consecutive vertices at unit distance.
bool is_nearest_neighbor_path(const LatticePath& path);

/// Endpoints on dA, every intermediate vertex in A, length >= 2.
bool is_excursion(const LatticePath& path, const LatticeDomain& domain);

bool is_self_avoiding(const LatticePath& path);

/// Simple random walk from boundary vertex x with a uniform first step over all
/// four directions; returns nullopt when that first step does not enter A.
/// The success-and-exit-at-y frequency is therefore an unbiased estimate of
/// h_dA(x, y).
std::optional<LatticePath> try_sample_excursion(const LatticeDomain& domain, Point x, Engine& rng);

/// Excursion from x conditioned on its first step entering A (the first step is
/// uniform over the interior neighbours of x). Throws NoInteriorNeighbor.
LatticePath sample_excursion(const LatticeDomain& domain, Point x, Engine& rng);

/// Doob h-transform of simple random walk for the target boundary vertex y:
/// from interior z the walk moves to neighbour w with probability
/// h(w) / (4 h_A(z, y)), where h = h_A(., y) on A, 1 at y and 0 elsewhere on dA.
class ConditionedWalk {
 public:
  ConditionedWalk(const LatticeDomain& domain, const PoissonKernelField& field);

  Point target() const noexcept { return target_; }

  /// Excursion from x distributed as the free excursion conditioned to exit at
  /// y. Throws ImpossibleConditioning if h_dA(x, y) = 0.
  LatticePath sample(Point x, Engine& rng) const;

  /// Transition probabilities out of interior vertex `interior_index`, kSteps order.
  std::array<double, 4> transition(std::size_t interior_index) const;

 private:
  const LatticeDomain* domain_;
  Point target_;
  int target_site_;
  std::vector<double> h_;                   // interior values of h_A(., y)
  std::vector<std::array<double, 4>> cdf_;  // cumulative transition weights
};

/// Chronological loop erasure: s_0 = last visit to S_0, s_i = last visit to
/// S_{s_{i-1}+1}, stopping once s_i = k.
LatticePath loop_erase(const LatticePath& path);

/// Reusable scratch space for loop erasure in hot Monte Carlo loops.
class LoopEraser {
 public:
  const std::vector<Point>& operator()(const std::vector<Point>& path);

 private:
  std::unordered_map<Point, std::size_t> last_visit_;
  std::vector<Point> erased_;
};

/// Pivot swap used in the two-path counting argument.
///
/// With v the first vertex of L(first) (after its starting point) that `second`
/// visits among its interior vertices, l1 the last visit of `first` to v and
/// l2 the last visit of `second` to v, returns
///   (first[0..l1] + second[l2+1..], second[0..l2] + first[l1+1..]).
/// The construction is an involution on intersecting pairs, so it is its own
/// inverse when neither path exits at the other's starting point. Throws
/// NoIntersection if L(first) and second share no interior vertex.
std::pair<LatticePath, LatticePath> tail_swap(const LatticePath& first, const LatticePath& second);

/// Inverse of tail_swap (the same construction applied to the swapped pair).
std::pair<LatticePath, LatticePath> tail_swap_inverse(const LatticePath& first,
                                                      const LatticePath& second);

}  // namespace fominlab
