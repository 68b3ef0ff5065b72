#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "fominlab/config.hpp"
#include "fominlab/lattice.hpp"
#include "fominlab/report.hpp"

namespace fominlab {

/// {"type": "rectangle", "width", "height"} | {"type": "disk", "delta"} |
/// {"type": "half_disk", "radius"} | {"type": "explicit", "interior": [[x, y], ...]}.
LatticeDomain domain_from_config(const Config& spec);

struct ConvergeConfig {
  std::vector<double> deltas{0.1, 0.05, 0.025};
  /// Angles of x^1..x^n, y^n..y^1 on the unit circle, counterclockwise.
  std::vector<double> angles;

  /// Disk images of the half-plane points 0, x, 1, infinity under
  /// z -> (iz + 1)/(z + i); the continuum target is x(2 - x).
  static ConvergeConfig halfplane(double x);
};

struct ConvergenceRow {
  double delta = 0.0;
  std::size_t interior_size = 0;
  double discrete = 0.0;
  double continuum = 0.0;
  double error = 0.0;
};

struct ConvergeResult {
  std::vector<ConvergenceRow> rows;
  bool monotone = true;  // each error at most 1.1 times the previous one
};

/// Exact discrete conditional ratio on the delta-scaled disk with nearest
/// boundary marks, against the continuum det-ratio at the given angles.
ConvergeResult run_converge(const ConvergeConfig& config);
Report to_report(const ConvergeResult& result);

struct AvoidConfig {
  double x = 0.5;
  double y = 1.0;
  std::uint64_t n_traces = 2000;
  double trace_dt = 1e-4;
  double excursion_delta = 1.0 / 40.0;
  double t_max = 0.0;          // capacity at which traces stop; 0 selects 25 y^2
  double radius_factor = 8.0;  // excursion domain: half-disk of radius radius_factor * y
  bool fast_zipper = true;
};

enum class AvoidStatus { Pass, BiasWarning, Fail };
std::string_view to_string(AvoidStatus s) noexcept;

inline constexpr double kAvoidPassBand = 0.05;
inline constexpr double kAvoidWarnBand = 0.08;

struct AvoidResult {
  AvoidConfig config;
  std::uint64_t seed = 0;
  double t_max = 0.0;
  double target = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;
  double deviation = 0.0;
  std::uint64_t avoided = 0;
  std::uint64_t pairs = 0;
  double mean_trace_steps = 0.0;
  double mean_excursion_steps = 0.0;
  std::size_t excursion_domain_sites = 0;
  AvoidStatus status = AvoidStatus::Fail;
  double wall_seconds = 0.0;
};

/// SLE_2 traces from 0 (parametrized by capacity, dg = dt / (g - W), truncated
/// at hcap = t_max) against independent lattice excursions from x to y at mesh
/// excursion_delta in the upper half-disk. Intersection: a trace segment crosses an excursion edge or
/// a trace vertex lies within excursion_delta / 2 of one.
AvoidResult run_avoid(const AvoidConfig& config, std::uint64_t seed);
Report to_report(const AvoidResult& result);

}  // namespace fominlab
