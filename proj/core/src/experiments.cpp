#include "fominlab/experiments.hpp"

#include <chrono>
#include <cmath>
#include <memory>

#include "fominlab/continuum.hpp"
#include "fominlab/error.hpp"
#include "fominlab/kernel.hpp"
#include "fominlab/loewner.hpp"
#include "fominlab/parallel.hpp"
#include "fominlab/polyline.hpp"
#include "fominlab/rng.hpp"
#include "fominlab/walks.hpp"

namespace fominlab {

LatticeDomain domain_from_config(const Config& spec) {
  const std::string type = spec.text("type", "");
  if (type == "rectangle") {
    spec.check_keys({"type", "width", "height"});
    return build_rectangle(static_cast<int>(spec.integer("width", 0)),
                           static_cast<int>(spec.integer("height", 0)));
  }
  if (type == "disk") {
    spec.check_keys({"type", "delta"});
    return build_scaled_disk(spec.number("delta", 0.0));
  }
  if (type == "half_disk") {
    spec.check_keys({"type", "radius"});
    return build_half_disk(spec.number("radius", 0.0));
  }
  if (type == "explicit") {
    spec.check_keys({"type", "interior"});
    return build_explicit(spec.points("interior", {}));
  }
  throw Error(ErrorCode::Config, "domain type must be rectangle, disk, half_disk or explicit");
}

ConvergeConfig ConvergeConfig::halfplane(double x) {
  if (!(x > 0.0 && x < 1.0)) throw Error(ErrorCode::OrderViolation, "need 0 < x < 1");
  const MobiusMap f = MobiusMap::halfplane_to_disk();
  ConvergeConfig c;
  c.angles = {std::arg(f.apply(0.0)), std::arg(f.apply(x)), std::arg(f.apply(1.0)),
              std::arg(f(ExtendedComplex::infinity()).value)};
  return c;
}

ConvergeResult run_converge(const ConvergeConfig& config) {
  const std::size_t m = config.angles.size();
  if (m == 0 || m % 2 != 0) throw Error(ErrorCode::InvalidArgument, "need 2n boundary angles");
  if (config.deltas.empty()) throw Error(ErrorCode::InvalidArgument, "empty delta list");
  for (std::size_t i = 1; i < config.deltas.size(); ++i) {
    if (!(config.deltas[i] < config.deltas[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "delta list must be strictly descending");
    }
  }
  const std::size_t n = m / 2;
  std::vector<double> ax(n), ay(n);
  for (std::size_t i = 0; i < n; ++i) {
    ax[i] = config.angles[i];
    ay[i] = config.angles[m - 1 - i];
  }
  const double continuum = det_ratio_disk(ax, ay);

  ConvergeResult result;
  for (double delta : config.deltas) {
    auto domain = std::make_shared<const LatticeDomain>(build_scaled_disk(delta));
    std::vector<Point> pts;
    for (double a : config.angles) pts.push_back(mark_nearest_boundary(*domain, delta, a));
    const MarkedBoundary marks = validate_marks(*domain, pts);
    KernelSolver solver(domain);
    ConvergenceRow row;
    row.delta = delta;
    row.interior_size = domain->interior_size();
    row.discrete = fomin_conditional_ratio(solver, marks);
    row.continuum = continuum;
    row.error = std::abs(row.discrete - row.continuum);
    if (!result.rows.empty() && row.error > 1.1 * result.rows.back().error) result.monotone = false;
    result.rows.push_back(row);
  }
  return result;
}

Report to_report(const ConvergeResult& result) {
  Report r("converge");
  r.set("row_count", static_cast<std::uint64_t>(result.rows.size()));
  r.set("monotone", result.monotone);
  if (!result.rows.empty()) {
    r.set("continuum", result.rows.back().continuum);
    r.set("final_error", result.rows.back().error);
  }
  if (!result.monotone) r.set("warning", "errors not weakly decreasing within 10% slack");
  r.set_columns({"delta", "interior_size", "discrete_ratio", "continuum_target", "abs_error"});
  for (const auto& row : result.rows) {
    r.add_row({row.delta, static_cast<std::uint64_t>(row.interior_size), row.discrete,
               row.continuum, row.error});
  }
  return r;
}

std::string_view to_string(AvoidStatus s) noexcept {
  switch (s) {
    case AvoidStatus::Pass: return "pass";
    case AvoidStatus::BiasWarning: return "bias_warning";
    case AvoidStatus::Fail: return "fail";
  }
  return "fail";
}

namespace {

struct PairOutcome {
  bool avoided = false;
  std::size_t trace_steps = 0;
  std::size_t excursion_steps = 0;
};

}  // namespace

AvoidResult run_avoid(const AvoidConfig& config, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  const double target = sle2_avoid_probability(config.x, config.y);
  const double delta = config.excursion_delta;
  if (!(delta > 0.0) || !(config.trace_dt > 0.0) || config.n_traces == 0 ||
      !(config.radius_factor > 1.0) || config.t_max < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "invalid avoid configuration");
  }
  const double t_max = config.t_max > 0.0 ? config.t_max : 25.0 * config.y * config.y;

  auto domain = std::make_shared<const LatticeDomain>(
      build_half_disk(config.radius_factor * config.y / delta, delta));
  const Point mx{static_cast<int>(std::lround(config.x / delta)), 0};
  const Point my{static_cast<int>(std::lround(config.y / delta)), 0};
  if (mx == my || !domain->on_boundary(mx) || !domain->on_boundary(my)) {
    throw Error(ErrorCode::InvalidArgument, "x and y must resolve to distinct lattice points");
  }
  KernelSolver solver(domain);
  const ConditionedWalk walk(*domain, *solver.poisson_kernel(my));

  const double eps = 0.5 * delta;
  const auto n_steps = static_cast<std::size_t>(std::ceil(t_max / config.trace_dt - 1e-9));
  ZipperOptions zopt;
  zopt.fast = config.fast_zipper;

  const auto outcomes = parallel_map(static_cast<std::size_t>(config.n_traces), [&](std::size_t k) {
    Engine rng = make_stream(seed, k);
    // The excursion is drawn first so that the trace increments form the same
    // stream for every t_max.
    const LatticePath path = walk.sample(mx, rng);
    std::vector<Complex> poly;
    poly.reserve(path.vertices.size());
    for (const Point& p : path.vertices) poly.emplace_back(delta * p.x, delta * p.y);
    const EdgeGrid grid(poly, 2.0 * delta);

    PairOutcome out;
    out.excursion_steps = path.length();
    // hcap = t for kappa = 2 with the 2/kappa rate, so t_max is the capacity.
    Zipper zipper(capacity_rate(Parametrization::CapacityOverKappa, 2.0), zopt);
    NormalSampler normal;
    Complex prev = 0.0;
    bool hit = grid.near(prev, eps);
    double u = 0.0;
    std::size_t k_step = 0;
    for (; k_step < n_steps && !hit; ++k_step) {
      const double dt = std::min(config.trace_dt, t_max - static_cast<double>(k_step) * config.trace_dt);
      u += std::sqrt(dt) * normal(rng);
      const Complex tip = zipper.push(u, dt);
      hit = grid.touches(prev, tip, eps);
      prev = tip;
    }
    out.trace_steps = k_step;
    out.avoided = !hit;
    return out;
  });

  AvoidResult r;
  r.config = config;
  r.seed = seed;
  r.t_max = t_max;
  r.target = target;
  r.excursion_domain_sites = domain->interior_size();
  double trace_steps = 0.0, exc_steps = 0.0;
  for (const PairOutcome& o : outcomes) {
    r.avoided += o.avoided ? 1 : 0;
    trace_steps += static_cast<double>(o.trace_steps);
    exc_steps += static_cast<double>(o.excursion_steps);
  }
  r.pairs = outcomes.size();
  const double n = static_cast<double>(r.pairs);
  r.estimate = static_cast<double>(r.avoided) / n;
  r.std_error = std::sqrt(r.estimate * (1.0 - r.estimate) / n);
  r.deviation = r.estimate - target;
  r.mean_trace_steps = trace_steps / n;
  r.mean_excursion_steps = exc_steps / n;
  const double dev = std::abs(r.deviation);
  r.status = dev <= kAvoidPassBand   ? AvoidStatus::Pass
             : dev <= kAvoidWarnBand ? AvoidStatus::BiasWarning
                                     : AvoidStatus::Fail;
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

Report to_report(const AvoidResult& r) {
  Report rep("avoid");
  rep.set("x", r.config.x);
  rep.set("y", r.config.y);
  rep.set("seed", r.seed);
  rep.set("n_pairs", r.pairs);
  rep.set("trace_dt", r.config.trace_dt);
  rep.set("t_max", r.t_max);
  rep.set("excursion_delta", r.config.excursion_delta);
  rep.set("radius_factor", r.config.radius_factor);
  rep.set("excursion_domain_sites", static_cast<std::uint64_t>(r.excursion_domain_sites));
  rep.set("target_phi", r.target);
  rep.set("estimate", r.estimate);
  rep.set("std_error", r.std_error);
  rep.set("deviation", r.deviation);
  rep.set("avoided", r.avoided);
  rep.set("mean_trace_steps", r.mean_trace_steps);
  rep.set("mean_excursion_steps", r.mean_excursion_steps);
  rep.set("status", std::string(to_string(r.status)));
  rep.set("caveat",
          "excursions are lattice walks at mesh excursion_delta in a truncated half-disk and "
          "traces stop at t_max; both bias the estimate at order excursion_delta");
  return rep;
}

}  // namespace fominlab
