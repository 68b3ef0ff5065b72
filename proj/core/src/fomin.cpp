#include "fominlab/fomin.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <unordered_set>

#include "fominlab/error.hpp"
#include "fominlab/parallel.hpp"
#include "fominlab/rng.hpp"

namespace fominlab {
namespace {

// Membership marks over site ids; bumping the epoch clears the set in O(1).
class SiteMarks {
 public:
  explicit SiteMarks(std::size_t sites) : stamp_(sites, 0) {}
  void clear() { ++epoch_; }
  void insert(int site) { stamp_[static_cast<std::size_t>(site)] = epoch_; }
  bool contains(int site) const { return stamp_[static_cast<std::size_t>(site)] == epoch_; }

 private:
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 1;
};

struct TaskCounts {
  std::uint64_t hits = 0;
  std::uint64_t samples = 0;
};

template <class SamplePath>
TaskCounts run_crossing_task(const LatticeDomain& domain, const MarkedBoundary& marks,
                             std::uint64_t count, Engine& rng, SamplePath&& sample_path) {
  SiteMarks erased_union(domain.site_count());
  LoopEraser eraser;
  TaskCounts counts;
  const std::size_t n = marks.n();
  for (std::uint64_t s = 0; s < count; ++s) {
    erased_union.clear();
    bool event = true;
    for (std::size_t i = 0; i < n && event; ++i) {
      const std::optional<LatticePath> path = sample_path(i, rng);
      if (!path || path->back() != marks.y(i)) {
        event = false;
        break;
      }
      for (const Point& p : path->vertices) {
        if (erased_union.contains(domain.site_id(p))) {
          event = false;
          break;
        }
      }
      if (!event || i + 1 == n) break;
      for (const Point& p : eraser(path->vertices)) erased_union.insert(domain.site_id(p));
    }
    counts.hits += event ? 1 : 0;
    ++counts.samples;
  }
  return counts;
}

template <class TaskFn>
VerificationReport run_tasks(std::uint64_t n_samples, std::uint64_t seed, double exact,
                             TaskFn&& task) {
  if (n_samples == 0) throw Error(ErrorCode::InvalidArgument, "n_samples must be >= 1");
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t n_tasks = (n_samples + kSamplesPerTask - 1) / kSamplesPerTask;
  const auto results = parallel_map(static_cast<std::size_t>(n_tasks), [&](std::size_t t) {
    const std::uint64_t begin = t * kSamplesPerTask;
    const std::uint64_t count = std::min<std::uint64_t>(kSamplesPerTask, n_samples - begin);
    Engine rng = make_stream(seed, t);
    return task(count, rng);
  });
  VerificationReport report;
  report.exact = exact;
  report.seed = seed;
  for (const TaskCounts& c : results) {
    report.hits += c.hits;
    report.samples += c.samples;
  }
  finalize_bernoulli(report);
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace

bool VerificationReport::passed(double z_threshold) const {
  return std::isfinite(z_score) && std::abs(z_score) <= z_threshold;
}

void finalize_bernoulli(VerificationReport& report) {
  if (report.samples == 0) throw Error(ErrorCode::InvalidArgument, "no samples");
  const double n = static_cast<double>(report.samples);
  const double p = static_cast<double>(report.hits) / n;
  report.estimate = p;
  report.std_error = std::sqrt(p * (1.0 - p) / n);
  const double diff = report.estimate - report.exact;
  if (report.std_error > 0.0) {
    report.z_score = diff / report.std_error;
    return;
  }
  const double exact_sigma =
      std::sqrt(std::max(0.0, report.exact * (1.0 - report.exact)) / n);
  if (std::abs(diff) <= 1e-12) {
    report.z_score = 0.0;
  } else if (exact_sigma > 0.0) {
    report.std_error = exact_sigma;
    report.z_score = diff / exact_sigma;
  } else {
    report.z_score = diff > 0 ? std::numeric_limits<double>::infinity()
                              : -std::numeric_limits<double>::infinity();
  }
}

CrossingSample crossing_indicator(const MarkedBoundary& marks, std::span<const LatticePath> paths) {
  const std::size_t n = marks.n();
  if (paths.size() != n) throw Error(ErrorCode::InvalidArgument, "need one path per mark pair");
  CrossingSample out;
  out.exits.resize(n);
  out.avoids.resize(n);
  std::unordered_set<Point> erased_union;
  LoopEraser eraser;
  for (std::size_t i = 0; i < n; ++i) {
    const LatticePath& path = paths[i];
    if (path.vertices.empty() || path.front() != marks.x(i)) {
      throw Error(ErrorCode::InvalidArgument, "path " + std::to_string(i) + " must start at x^i");
    }
    out.exits[i] = path.back() == marks.y(i);
    bool avoid = true;
    for (const Point& p : path.vertices) {
      if (erased_union.contains(p)) {
        avoid = false;
        break;
      }
    }
    out.avoids[i] = avoid;
    for (const Point& p : eraser(path.vertices)) erased_union.insert(p);
  }
  out.event = true;
  for (std::size_t i = 0; i < n; ++i) out.event = out.event && out.exits[i] && out.avoids[i];
  return out;
}

VerificationReport estimate_crossing_probability(KernelSolver& solver, const MarkedBoundary& marks,
                                                 std::uint64_t n_samples, SamplingMode mode,
                                                 std::uint64_t seed) {
  const LatticeDomain& domain = solver.domain();
  const HittingMatrix m = hitting_matrix(solver, marks);

  if (mode == SamplingMode::Free) {
    return run_tasks(n_samples, seed, m.determinant(), [&](std::uint64_t count, Engine& rng) {
      return run_crossing_task(domain, marks, count, rng, [&](std::size_t i, Engine& r) {
        return try_sample_excursion(domain, marks.x(i), r);
      });
    });
  }

  const double exact = m.conditional_ratio();
  std::vector<ConditionedWalk> walks;
  walks.reserve(marks.n());
  for (std::size_t i = 0; i < marks.n(); ++i) {
    walks.emplace_back(domain, *solver.poisson_kernel(marks.y(i)));
  }
  return run_tasks(n_samples, seed, exact, [&](std::uint64_t count, Engine& rng) {
    return run_crossing_task(domain, marks, count, rng, [&](std::size_t i, Engine& r) {
      return std::optional<LatticePath>(walks[i].sample(marks.x(i), r));
    });
  });
}

VerificationReport verify_two_path_identity(KernelSolver& solver, const MarkedBoundary& marks,
                                            std::uint64_t n_samples, std::uint64_t seed,
                                            ErasedPath erased) {
  if (marks.n() != 2) throw Error(ErrorCode::InvalidArgument, "two-path identity needs n = 2");
  const LatticeDomain& domain = solver.domain();
  const double exact = fomin_conditional_ratio(solver, marks);
  const ConditionedWalk walk1(domain, *solver.poisson_kernel(marks.y(0)));
  const ConditionedWalk walk2(domain, *solver.poisson_kernel(marks.y(1)));

  return run_tasks(n_samples, seed, exact, [&](std::uint64_t count, Engine& rng) {
    SiteMarks erased_sites(domain.site_count());
    LoopEraser eraser;
    TaskCounts counts;
    for (std::uint64_t s = 0; s < count; ++s) {
      LatticePath p1 = walk1.sample(marks.x(0), rng);
      LatticePath p2 = walk2.sample(marks.x(1), rng);
      const LatticePath& looped = erased == ErasedPath::First ? p1 : p2;
      const LatticePath& plain = erased == ErasedPath::First ? p2 : p1;
      erased_sites.clear();
      for (const Point& p : eraser(looped.vertices)) erased_sites.insert(domain.site_id(p));
      bool disjoint = true;
      for (const Point& p : plain.vertices) {
        if (erased_sites.contains(domain.site_id(p))) {
          disjoint = false;
          break;
        }
      }
      counts.hits += disjoint ? 1 : 0;
      ++counts.samples;
    }
    return counts;
  });
}

}  // namespace fominlab
