#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fominlab/config.hpp"
#include "fominlab/continuum.hpp"
#include "fominlab/error.hpp"
#include "fominlab/experiments.hpp"
#include "fominlab/fomin.hpp"
#include "fominlab/kernel.hpp"
#include "fominlab/loewner.hpp"
#include "fominlab/report.hpp"
#include "fominlab/rng.hpp"
#include "fominlab/walks.hpp"

using namespace fominlab;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitError = 1;
constexpr int kExitStatFail = 2;

struct Common {
  std::string config_path;
  std::vector<std::string> overrides;  // key=value
  std::optional<std::uint64_t> seed;
  std::string out = "-";
  std::string format = "json";
  bool timing = false;
};

// Wall-clock time goes to stderr unless --timing asks for it in the report, so
// that output files depend only on settings and seed.
void record_time(Report& r, const Common& c, double seconds) {
  if (c.timing) {
    r.set("wall_seconds", seconds);
  } else {
    std::fprintf(stderr, "wall_seconds: %.3f\n", seconds);
  }
}

Config load_config(const Common& c) {
  Config cfg = c.config_path.empty() ? Config() : Config::load(c.config_path);
  for (const std::string& kv : c.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw Error(ErrorCode::Config, "--set expects key=value, got '" + kv + "'");
    }
    cfg.set_literal(kv.substr(0, eq), kv.substr(eq + 1));
  }
  return cfg;
}

std::uint64_t require_seed(const Common& c) {
  if (!c.seed) throw Error(ErrorCode::Config, "--seed is required for Monte Carlo subcommands");
  return *c.seed;
}

std::shared_ptr<const LatticeDomain> domain_of(const Config& cfg) {
  if (!cfg.has("domain")) throw Error(ErrorCode::Config, "missing 'domain'");
  return std::make_shared<const LatticeDomain>(domain_from_config(cfg.object("domain")));
}

Parametrization parametrization_of(const Config& cfg) {
  const std::string p = cfg.text("parametrization", "standard");
  if (p == "standard") return Parametrization::Standard;
  if (p == "capacity") return Parametrization::CapacityOverKappa;
  throw Error(ErrorCode::Config, "parametrization must be standard or capacity");
}

void add_verification(Report& r, const Common& c, const VerificationReport& v, double z_threshold) {
  r.set("exact", v.exact);
  r.set("estimate", v.estimate);
  r.set("std_error", v.std_error);
  r.set("z_score", v.z_score);
  r.set("hits", v.hits);
  r.set("samples", v.samples);
  r.set("seed", v.seed);
  r.set("z_threshold", z_threshold);
  r.set("passed", v.passed(z_threshold));
  record_time(r, c, v.wall_seconds);
}

int cmd_kernel(const Common& c) {
  const Config cfg = load_config(c);
  cfg.check_keys({"domain", "marks", "target"});
  auto domain = domain_of(cfg);
  KernelSolver solver(domain);
  Report r("kernel");
  r.set("interior_size", static_cast<std::uint64_t>(domain->interior_size()));
  r.set("boundary_size", static_cast<std::uint64_t>(domain->boundary_size()));
  if (const auto target = cfg.point("target")) {
    const auto field = solver.poisson_kernel(*target);
    r.set("target_x", target->x);
    r.set("target_y", target->y);
    r.set("residual", field->residual);
    r.set_columns({"x", "y", "h"});
    for (std::size_t i = 0; i < domain->interior_size(); ++i) {
      const Point z = domain->interior()[i];
      r.add_row({std::int64_t{z.x}, std::int64_t{z.y}, field->values[i]});
    }
  } else {
    if (!cfg.has("marks")) throw Error(ErrorCode::Config, "need 'marks' or 'target'");
    const MarkedBoundary marks = validate_marks(*domain, cfg.points("marks", {}));
    const HittingMatrix m = hitting_matrix(solver, marks);
    r.set("n", static_cast<std::uint64_t>(m.n()));
    r.set("determinant", m.determinant());
    bool zero_diag = false;
    for (std::size_t i = 0; i < m.n(); ++i) zero_diag = zero_diag || m.entries(i, i) == 0.0;
    if (zero_diag) {
      r.set("conditional_ratio", "undefined: zero diagonal entry");
    } else {
      r.set("conditional_ratio", m.conditional_ratio());
    }
    r.set_columns({"i", "l", "xi_x", "xi_y", "yl_x", "yl_y", "h"});
    for (std::size_t i = 0; i < m.n(); ++i) {
      for (std::size_t l = 0; l < m.n(); ++l) {
        r.add_row({static_cast<std::uint64_t>(i + 1), static_cast<std::uint64_t>(l + 1),
                   std::int64_t{m.xs[i].x}, std::int64_t{m.xs[i].y}, std::int64_t{m.ys[l].x},
                   std::int64_t{m.ys[l].y}, m.entries(i, l)});
      }
    }
  }
  emit_report(r, parse_format(c.format), c.out);
  return kExitPass;
}

int cmd_sample(const Common& c) {
  const std::uint64_t seed = require_seed(c);
  const Config cfg = load_config(c);
  cfg.check_keys({"domain", "start", "target", "count", "loop_erase"});
  auto domain = domain_of(cfg);
  const auto start = cfg.point("start");
  if (!start) throw Error(ErrorCode::Config, "missing 'start'");
  const auto target = cfg.point("target");
  const std::uint64_t count = cfg.count("count", 1);
  const bool erase = cfg.boolean("loop_erase", false);

  std::optional<KernelSolver> solver;
  std::optional<ConditionedWalk> walk;
  std::shared_ptr<const PoissonKernelField> field;
  if (target) {
    solver.emplace(domain);
    field = solver->poisson_kernel(*target);
    walk.emplace(*domain, *field);
  }
  std::vector<LatticePath> paths;
  for (std::uint64_t k = 0; k < count; ++k) {
    Engine rng = make_stream(seed, k);
    LatticePath p = walk ? walk->sample(*start, rng) : sample_excursion(*domain, *start, rng);
    paths.push_back(erase ? loop_erase(p) : std::move(p));
  }

  if (parse_format(c.format) == ReportFormat::Csv) {
    Report r("sample");
    r.set("seed", seed);
    r.set("count", count);
    r.set_columns({"path", "step", "x", "y"});
    for (std::size_t k = 0; k < paths.size(); ++k) {
      for (std::size_t s = 0; s < paths[k].vertices.size(); ++s) {
        const Point v = paths[k].vertices[s];
        r.add_row({static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(s),
                   std::int64_t{v.x}, std::int64_t{v.y}});
      }
    }
    emit_report(r, ReportFormat::Csv, c.out);
    return kExitPass;
  }
  nlohmann::ordered_json j;
  j["kind"] = "sample";
  j["seed"] = seed;
  j["count"] = count;
  j["conditioned"] = target.has_value();
  j["loop_erased"] = erase;
  j["paths"] = nlohmann::ordered_json::array();
  for (const LatticePath& p : paths) {
    auto arr = nlohmann::ordered_json::array();
    for (const Point& v : p.vertices) arr.push_back({v.x, v.y});
    j["paths"].push_back(std::move(arr));
  }
  write_text(j.dump() + "\n", c.out);
  return kExitPass;
}

int cmd_fomin_mc(const Common& c) {
  const std::uint64_t seed = require_seed(c);
  const Config cfg = load_config(c);
  cfg.check_keys({"domain", "marks", "samples", "mode", "erased", "z_threshold"});
  auto domain = domain_of(cfg);
  const MarkedBoundary marks = validate_marks(*domain, cfg.points("marks", {}));
  KernelSolver solver(domain);
  const std::uint64_t n = cfg.count("samples", 100000);
  const std::string mode = cfg.text("mode", "free");
  const double z = cfg.number("z_threshold", 4.0);

  VerificationReport v;
  if (mode == "free") {
    v = estimate_crossing_probability(solver, marks, n, SamplingMode::Free, seed);
  } else if (mode == "conditioned") {
    v = estimate_crossing_probability(solver, marks, n, SamplingMode::Conditioned, seed);
  } else if (mode == "two_path") {
    const std::string erased = cfg.text("erased", "first");
    if (erased != "first" && erased != "second") {
      throw Error(ErrorCode::Config, "erased must be first or second");
    }
    v = verify_two_path_identity(solver, marks, n, seed,
                                 erased == "first" ? ErasedPath::First : ErasedPath::Second);
  } else {
    throw Error(ErrorCode::Config, "mode must be free, conditioned or two_path");
  }
  Report r("fomin-mc");
  r.set("mode", mode);
  r.set("n", static_cast<std::uint64_t>(marks.n()));
  add_verification(r, c, v, z);
  emit_report(r, parse_format(c.format), c.out);
  return v.passed(z) ? kExitPass : kExitStatFail;
}

int cmd_avoid_exact(const Common& c) {
  const Config cfg = load_config(c);
  cfg.check_keys({"x", "y", "tolerance"});
  const double x = cfg.number("x", 0.5), y = cfg.number("y", 1.0);
  const double tol = cfg.number("tolerance", 1e-12);
  const double phi = sle2_avoid_probability(x, y);
  // 0 < x < y < infinity, scaled so that y = 1, then carried to the disk.
  const ConvergeConfig disk = ConvergeConfig::halfplane(x / y);
  const std::vector<double> ax{disk.angles[0], disk.angles[1]};
  const std::vector<double> ay{disk.angles[3], disk.angles[2]};
  const double det = det_ratio_disk(ax, ay);
  const double corollary = corollary_avoid_probability(BoundaryPointH{0.0}, BoundaryPointH{x},
                                                       BoundaryPointH{y}, BoundaryPointH::infinity());
  Report r("avoid-exact");
  r.set("x", x);
  r.set("y", y);
  r.set("phi", phi);
  r.set("det_ratio", det);
  r.set("difference", det - phi);
  r.set("corollary", corollary);
  r.set("tolerance", tol);
  const bool ok = std::abs(det - phi) <= tol && std::abs(corollary - phi) <= tol;
  r.set("passed", ok);
  emit_report(r, parse_format(c.format), c.out);
  return ok ? kExitPass : kExitStatFail;
}

int cmd_sle_trace(const Common& c) {
  const std::uint64_t seed = require_seed(c);
  const Config cfg = load_config(c);
  cfg.check_keys({"kappa", "steps", "dt", "parametrization", "fast"});
  const double kappa = cfg.number("kappa", 2.0);
  const std::uint64_t n = cfg.count("steps", 10000);
  const double dt = cfg.number("dt", 1e-4);
  ZipperOptions opt;
  opt.fast = cfg.boolean("fast", true);
  Engine rng = make_stream(seed, 0);
  const LoewnerTrace t = sle_trace(kappa, n, dt, rng, parametrization_of(cfg), opt);
  Report r("sle-trace");
  r.set("kappa", kappa);
  r.set("steps", n);
  r.set("dt", dt);
  r.set("seed", seed);
  r.set("hcap", hcap_estimate(t));
  r.set_columns({"t", "re", "im"});
  for (std::size_t k = 0; k < t.points.size(); ++k) {
    r.add_row({t.times[k], t.points[k].real(), t.points[k].imag()});
  }
  emit_report(r, parse_format(c.format), c.out);
  return kExitPass;
}

int cmd_martingale(const Common& c) {
  const std::uint64_t seed = require_seed(c);
  const Config cfg = load_config(c);
  cfg.check_keys({"x", "y", "T", "dt", "paths", "antithetic", "z_threshold"});
  MartingaleOptions opt;
  opt.antithetic = cfg.boolean("antithetic", false);
  const double z = cfg.number("z_threshold", 4.0);
  const MartingaleReport m =
      martingale_check(cfg.number("x", 0.5), cfg.number("y", 1.0), cfg.number("T", 0.05),
                       cfg.number("dt", 1e-5), cfg.count("paths", 10000), seed, opt);
  Report r("martingale");
  r.set("x", m.x);
  r.set("y", m.y);
  r.set("T", m.T);
  r.set("dt", m.dt);
  r.set("paths", m.n_paths);
  r.set("seed", m.seed);
  r.set("antithetic", opt.antithetic);
  r.set("target", m.target);
  r.set("estimate", m.estimate);
  r.set("std_error", m.std_error);
  r.set("z_score", m.z_score);
  r.set("stopped_paths", m.stopped_paths);
  r.set("halvings", m.halvings);
  r.set("z_threshold", z);
  r.set("passed", m.passed(z));
  record_time(r, c, m.wall_seconds);
  emit_report(r, parse_format(c.format), c.out);
  return m.passed(z) ? kExitPass : kExitStatFail;
}

int cmd_converge(const Common& c) {
  const Config cfg = load_config(c);
  cfg.check_keys({"deltas", "x", "angles"});
  ConvergeConfig cc;
  if (cfg.has("angles")) {
    if (cfg.has("x")) throw Error(ErrorCode::Config, "give either 'x' or 'angles'");
    cc.angles = cfg.numbers("angles", {});
  } else {
    cc = ConvergeConfig::halfplane(cfg.number("x", 0.5));
  }
  cc.deltas = cfg.numbers("deltas", ConvergeConfig{}.deltas);
  const ConvergeResult res = run_converge(cc);
  if (!res.monotone) std::fprintf(stderr, "warning: errors are not weakly decreasing in delta\n");
  emit_report(to_report(res), parse_format(c.format), c.out);
  return kExitPass;
}

int cmd_avoid(const Common& c) {
  const std::uint64_t seed = require_seed(c);
  const Config cfg = load_config(c);
  cfg.check_keys({"x", "y", "pairs", "trace_dt", "excursion_delta", "t_max", "radius_factor",
                  "fast"});
  AvoidConfig ac;
  ac.x = cfg.number("x", ac.x);
  ac.y = cfg.number("y", ac.y);
  ac.n_traces = cfg.count("pairs", ac.n_traces);
  ac.trace_dt = cfg.number("trace_dt", ac.trace_dt);
  ac.excursion_delta = cfg.number("excursion_delta", ac.excursion_delta);
  ac.t_max = cfg.number("t_max", ac.t_max);
  ac.radius_factor = cfg.number("radius_factor", ac.radius_factor);
  ac.fast_zipper = cfg.boolean("fast", ac.fast_zipper);
  const AvoidResult res = run_avoid(ac, seed);
  if (res.status == AvoidStatus::BiasWarning) {
    std::fprintf(stderr, "warning: deviation %.4f is inside the bias band\n", res.deviation);
  }
  Report r = to_report(res);
  record_time(r, c, res.wall_seconds);
  emit_report(r, parse_format(c.format), c.out);
  return res.status == AvoidStatus::Fail ? kExitStatFail : kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete and continuum checks of Fomin's identity"};
  app.require_subcommand(1);
  Common common;
  int code = kExitPass;

  auto add = [&](const char* name, const char* help, int (*fn)(const Common&)) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", common.config_path, "JSON settings file")->check(CLI::ExistingFile);
    sub->add_option("--set", common.overrides, "override a settings field, key=json_value");
    sub->add_option("--seed", common.seed, "RNG seed (required for Monte Carlo)");
    sub->add_option("--out", common.out, "output path, - for stdout");
    sub->add_option("--format", common.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_flag("--timing", common.timing, "include wall-clock seconds in the report");
    sub->callback([&, fn] { code = fn(common); });
  };
  add("kernel", "hitting matrix, determinant and ratio, or one Poisson kernel field", cmd_kernel);
  add("sample", "excursions (optionally conditioned and loop-erased) as vertex lists", cmd_sample);
  add("fomin-mc", "Monte Carlo crossing probability against the determinant", cmd_fomin_mc);
  add("avoid-exact", "phi(x/y) against the disk det-ratio", cmd_avoid_exact);
  add("sle-trace", "one SLE trace as (t, Re, Im)", cmd_sle_trace);
  add("martingale", "optional-stopping check of J_t phi(X_t / Y_t)", cmd_martingale);
  add("converge", "exact discrete ratio on shrinking meshes", cmd_converge);
  add("avoid", "SLE_2 trace against lattice excursion avoidance", cmd_avoid);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return code;
}
