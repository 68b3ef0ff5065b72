#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fominlab/kernel.hpp"
#include "fominlab/walks.hpp"

namespace fominlab {

/// Per-path conditions of the crossing event: path i exits at y^i, and for
/// i >= 2 it avoids the union of the loop erasures of paths 1..i-1.
struct CrossingSample {
  std::vector<bool> exits;
  std::vector<bool> avoids;  // avoids[0] is vacuously true
  bool event = false;
};

CrossingSample crossing_indicator(const MarkedBoundary& marks, std::span<const LatticePath> paths);

enum class SamplingMode { Free, Conditioned };

struct VerificationReport {
  double exact = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;
  double z_score = 0.0;
  std::uint64_t hits = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  double wall_seconds = 0.0;

  bool passed(double z_threshold = 4.0) const;
};

/// Fills estimate = hits / samples, std_error = sqrt(p(1-p)/N) and the
/// z-score. When the empirical variance vanishes the exact value's Bernoulli
/// variance is used instead.
void finalize_bernoulli(VerificationReport& report);

/// Free mode estimates P(C) against det h_dA; conditioned mode draws
/// h-transformed walks (exits forced) and estimates the avoidance probability
/// against det / prod diag.
VerificationReport estimate_crossing_probability(KernelSolver& solver, const MarkedBoundary& marks,
                                                 std::uint64_t n_samples, SamplingMode mode,
                                                 std::uint64_t seed);

enum class ErasedPath { First, Second };

/// P{ L^1 and S^2 disjoint } for conditioned excursions x^1 -> y^1 and
/// x^2 -> y^2. `erased` chooses which of the two walks is loop-erased.
VerificationReport verify_two_path_identity(KernelSolver& solver, const MarkedBoundary& marks,
                                            std::uint64_t n_samples, std::uint64_t seed,
                                            ErasedPath erased = ErasedPath::First);

/// Samples per derived RNG stream; fixed so results do not depend on the
/// number of worker threads.
inline constexpr std::uint64_t kSamplesPerTask = 4096;

}  // namespace fominlab
