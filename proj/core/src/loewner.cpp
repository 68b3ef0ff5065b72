#include "fominlab/loewner.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#include "fominlab/continuum.hpp"
#include "fominlab/error.hpp"
#include "fominlab/parallel.hpp"

namespace fominlab {
namespace {

// sqrt(x + iy) on the branch with nonnegative imaginary part; on the real
// axis the sign follows `side` so that real points stay on their side of the
// slit. Written out in real arithmetic because this is the innermost loop of
// every trace.
Complex upper_sqrt(double x, double y, double side) {
  const double m = std::sqrt(x * x + y * y);
  double re, im;
  if (x >= 0.0) {
    re = std::sqrt(0.5 * (m + x));
    im = re > 0.0 ? 0.5 * std::abs(y) / re : 0.0;
    if (y < 0.0 || (y == 0.0 && side < 0.0)) re = -re;
  } else {
    im = std::sqrt(0.5 * (m - x));
    re = 0.5 * std::abs(y) / im;
    if (y < 0.0) re = -re;
  }
  return {re, im};
}

}  // namespace

double capacity_rate(Parametrization p, double kappa) {
  if (p == Parametrization::Standard) return 2.0;
  if (!(kappa > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "hcap = 2t/kappa needs kappa > 0");
  }
  return 2.0 / kappa;
}

void DrivingFunction::validate() const {
  if (times.size() < 2 || values.size() != times.size()) {
    throw Error(ErrorCode::InvalidArgument, "driving function needs N >= 1 steps");
  }
  if (times[0] != 0.0 || values[0] != 0.0) {
    throw Error(ErrorCode::InvalidArgument, "driving function must start at t = 0, U = 0");
  }
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (!(times[k] > times[k - 1])) {
      throw Error(ErrorCode::InvalidArgument, "time grid must be strictly increasing");
    }
  }
  if (!(kappa >= 0.0)) throw Error(ErrorCode::InvalidArgument, "kappa must be >= 0");
  (void)rate();
}

DrivingFunction DrivingFunction::zero(std::size_t n, double dt, double kappa, Parametrization p) {
  if (n == 0 || !(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "need N >= 1, dt > 0");
  DrivingFunction d;
  d.kappa = kappa;
  d.parametrization = p;
  d.times.resize(n + 1);
  d.values.assign(n + 1, 0.0);
  for (std::size_t k = 0; k <= n; ++k) d.times[k] = static_cast<double>(k) * dt;
  return d;
}

DrivingFunction DrivingFunction::brownian(double kappa, std::size_t n, double dt, Engine& rng,
                                          Parametrization p) {
  if (!(kappa >= 0.0)) throw Error(ErrorCode::InvalidArgument, "kappa must be >= 0");
  DrivingFunction d = zero(n, dt, kappa, p);
  const double scale = (p == Parametrization::Standard ? std::sqrt(kappa) : 1.0) * std::sqrt(dt);
  NormalSampler normal;
  double u = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    u += scale * normal(rng);
    d.values[k] = u;
  }
  return d;
}

Complex slit_step(Complex g, double u, double c) {
  const double x = g.real() - u, y = g.imag();
  const Complex s = upper_sqrt(x * x - y * y + c, 2.0 * x * y, x);
  return {u + s.real(), s.imag()};
}

Complex slit_step_inverse(Complex w, double u, double c) {
  const double x = w.real() - u, y = w.imag();
  const Complex s = upper_sqrt(x * x - y * y - c, 2.0 * x * y, x);
  return {u + s.real(), s.imag()};
}

ForwardResult solve_forward(Complex z, const DrivingFunction& driving, double T) {
  driving.validate();
  if (z.imag() < 0.0 || z == Complex(0.0)) {
    throw Error(ErrorCode::InvalidArgument, "z must lie in the closed upper half-plane minus 0");
  }
  const double a = driving.rate();
  const bool real_point = z.imag() == 0.0;
  double side = real_point ? (z.real() > 0.0 ? 1.0 : -1.0) : 0.0;
  Complex g = z;
  for (std::size_t k = 1; k < driving.times.size() && driving.times[k - 1] < T; ++k) {
    const double t0 = driving.times[k - 1];
    const double dt = std::min(driving.times[k], T) - t0;
    const double u = driving.values[k];
    const double c = 2.0 * a * dt;
    const Complex w = g - u;
    if (std::abs(w) < kSwallowThreshold) return Swallowed{t0};
    if (real_point) {
      const double s = w.real() > 0.0 ? 1.0 : -1.0;
      if (s != side) {
        throw Error(ErrorCode::StepTooLarge,
                    "driving value jumped past a real point at t = " + std::to_string(t0));
      }
    } else if (std::abs(w.real()) <= 1e-12 * std::abs(w)) {
      // On the slit above U: (w^2 + c') reaches 0 for some c' in [0, c].
      const double w2 = -w.imag() * w.imag();
      if (w2 + c >= 0.0) return Swallowed{t0 + std::clamp(-w2 / (2.0 * a), 0.0, dt)};
    }
    g = slit_step(g, u, c);
    if (std::abs(g - u) < kSwallowThreshold) return Swallowed{t0 + dt};
  }
  return g;
}

Zipper::Zipper(double rate, ZipperOptions options) : rate_(rate), opt_(options) {
  if (!(rate_ > 0.0)) throw Error(ErrorCode::InvalidArgument, "capacity rate must be > 0");
  const bool power_of_two =
      opt_.branching >= 2 && std::popcount(static_cast<unsigned>(opt_.branching)) == 1;
  if (opt_.fast && (!power_of_two || opt_.terms < 1 || opt_.samples < 8 || opt_.samples % 2 != 0 ||
                    !(opt_.sample_radius > 1.0) || !(opt_.far_field > opt_.sample_radius))) {
    throw Error(ErrorCode::InvalidArgument, "invalid zipper options");
  }
  if (!opt_.fast) return;
  log2_branching_ = static_cast<std::size_t>(std::countr_zero(static_cast<unsigned>(opt_.branching)));
  for (int k = 0; k < kTruncationLevels; ++k) {
    const double radius = opt_.far_field * std::pow(2.0, 0.5 * (k + 1));
    truncation_norm_[k] = radius * radius;
    truncation_terms_[k] =
        std::min(opt_.terms, static_cast<int>(std::ceil(13.0 * std::log(10.0) / std::log(radius))));
  }
  // Sample points on the upper half of |zeta| = rho, as offsets (zeta + 1/zeta)/2
  // in units of the block radius, and the weights turning samples into
  // coefficients: a_n = rho^n (2/M) sum_m Re(d_m e^{i n theta_m}).
  const auto m_total = static_cast<std::size_t>(opt_.samples);
  const std::size_t half = m_total / 2;
  const double rho = opt_.sample_radius;
  sample_points_.resize(half);
  fourier_.resize(half * static_cast<std::size_t>(opt_.terms));
  for (std::size_t m = 0; m < half; ++m) {
    const double theta = 2.0 * std::numbers::pi * (static_cast<double>(m) + 0.5) /
                         static_cast<double>(m_total);
    const Complex zeta = std::polar(rho, theta);
    sample_points_[m] = 0.5 * (zeta + 1.0 / zeta);
    for (int n = 1; n <= opt_.terms; ++n) {
      fourier_[static_cast<std::size_t>(n - 1) * half + m] =
          std::pow(rho, n) * 2.0 / static_cast<double>(m_total) * std::polar(1.0, n * theta);
    }
  }
}

bool Zipper::try_series(const Level& level, std::size_t index, Complex w, Complex& out) const {
  const double r = level.radius[index];
  const double sx = (w.real() - level.center[index]) / r, sy = w.imag() / r;
  // Outside the ellipse zeta + 1/zeta = 2s with |zeta| = far_field; checked
  // before any square root.
  const double f = opt_.far_field, ax = 0.5 * (f + 1.0 / f), ay = 0.5 * (f - 1.0 / f);
  if ((sx * sx) / (ax * ax) + (sy * sy) / (ay * ay) < 1.0) return false;
  // zeta = s + sqrt(s^2 - 1) with the root taken so that |zeta| > 1.
  Complex root = upper_sqrt(sx * sx - sy * sy - 1.0, 2.0 * sx * sy, sx);
  if (root.real() * sx + root.imag() * sy < 0.0) root = -root;
  const double zr = sx + root.real(), zi = sy + root.imag();
  const double n2 = zr * zr + zi * zi;
  const double ir = zr / n2, ii = -zi / n2;  // 1 / zeta
  const double* a = &level.coef[index * static_cast<std::size_t>(opt_.terms)];
  // Terms beyond |zeta|^{-n} < 1e-13 are dropped.
  int terms = opt_.terms;
  for (int k = 0; k < kTruncationLevels && n2 >= truncation_norm_[k]; ++k) terms = truncation_terms_[k];
  // sum_{n>=1} a_n z^n with real a_n. Each parity is a polynomial in Z = z^2
  // summed by the second-order (Goertzel) recurrence
  // b_k = c_k + 2 Re(Z) b_{k+1} - |Z|^2 b_{k+2}; the two chains run side by side.
  const double zr2 = ir * ir - ii * ii, zi2 = 2.0 * ir * ii;
  const double two_re = 2.0 * zr2, abs2 = zr2 * zr2 + zi2 * zi2;
  // even: sum_m a[2m+1] Z^{m+1}; odd: z (a[0] + sum_m a[2m+2] Z^{m+1})
  double e1 = 0.0, e2 = 0.0, o1 = 0.0, o2 = 0.0;
  const int half = terms / 2;
  if (terms % 2 == 0) {
    e1 = a[terms - 1];
    for (int m = half - 2; m >= 0; --m) {
      const double e0 = a[2 * m + 1] + two_re * e1 - abs2 * e2;
      const double o0 = a[2 * m + 2] + two_re * o1 - abs2 * o2;
      e2 = e1, e1 = e0, o2 = o1, o1 = o0;
    }
  } else {
    for (int m = half - 1; m >= 0; --m) {
      const double e0 = a[2 * m + 1] + two_re * e1 - abs2 * e2;
      const double o0 = a[2 * m + 2] + two_re * o1 - abs2 * o2;
      e2 = e1, e1 = e0, o2 = o1, o1 = o0;
    }
  }
  const double er = zr2 * e1 - abs2 * e2, ei = zi2 * e1;
  const double pr = a[0] + zr2 * o1 - abs2 * o2, pi = zi2 * o1;
  out = {w.real() + er + ir * pr - ii * pi, w.imag() + ei + ir * pi + ii * pr};
  return true;
}

Complex Zipper::apply_range(std::size_t begin, std::size_t end, Complex w) const {
  std::size_t e = end;
  while (e > begin) {
    // Highest level whose block boundary falls on e.
    std::size_t top = std::min<std::size_t>(
        levels_.size(), static_cast<std::size_t>(std::countr_zero(e)) / log2_branching_);
    bool applied = false;
    for (std::size_t L = top; L >= 1; --L) {
      const Level& level = levels_[L - 1];
      if (e - begin < level.size) continue;
      const std::size_t index = (e >> (L * log2_branching_)) - 1;
      if (index >= level.radius.size()) continue;
      Complex out;
      if (try_series(level, index, w, out)) {
        w = out;
        e -= level.size;
        applied = true;
        break;
      }
    }
    if (!applied) {
      --e;
      w = slit_step_inverse(w, u_[e], c_[e]);
    }
  }
  return w;
}

void Zipper::build_block(std::size_t level_number, std::size_t index) {
  Level& level = levels_[level_number - 1];
  const std::size_t begin = index * level.size;
  const std::size_t end = begin + level.size;

  // Forward image on the real line of the hull grown during the block.
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t k = begin; k < end; ++k) {
    const double u = u_[k];
    hi = u + std::sqrt(std::pow(std::max(hi - u, 0.0), 2) + c_[k]);
    lo = u - std::sqrt(std::pow(std::max(u - lo, 0.0), 2) + c_[k]);
  }
  const double center = 0.5 * (lo + hi);
  const double radius = 0.5 * (hi - lo);

  const std::size_t half = sample_points_.size();
  const auto p = static_cast<std::size_t>(opt_.terms);
  std::vector<Complex> d(half);
  for (std::size_t m = 0; m < half; ++m) {
    const Complex w = center + radius * sample_points_[m];
    d[m] = apply_range(begin, end, w) - w;
  }
  // The block map commutes with conjugation, so the coefficients are real and
  // the lower half of the circle mirrors the upper half.
  for (std::size_t n = 0; n < p; ++n) {
    double sum = 0.0;
    const Complex* e = &fourier_[n * half];
    for (std::size_t m = 0; m < half; ++m) {
      sum += d[m].real() * e[m].real() - d[m].imag() * e[m].imag();
    }
    level.coef.push_back(sum);
  }
  level.center.push_back(center);
  level.radius.push_back(radius);
}

Complex Zipper::push(double u, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "dt must be > 0");
  const double c = 2.0 * rate_ * dt;
  u_.push_back(u);
  c_.push_back(c);
  capacity_ += 0.5 * c;
  const std::size_t n = u_.size();
  if (opt_.fast) {
    const auto b = static_cast<std::size_t>(opt_.branching);
    std::size_t size = b;
    for (std::size_t L = 1; n % size == 0; ++L, size *= b) {
      if (levels_.size() < L) levels_.push_back(Level{size, {}, {}, {}});
      build_block(L, n / size - 1);
      if (size > n / b) break;
    }
  }
  tip_ = apply_range(0, n, u);
  return tip_;
}

Complex Zipper::inverse_map(Complex w) const { return apply_range(0, u_.size(), w); }

LoewnerTrace trace_from_driving(const DrivingFunction& driving, ZipperOptions options) {
  driving.validate();
  Zipper zipper(driving.rate(), options);
  LoewnerTrace trace;
  const std::size_t n = driving.steps();
  trace.times = driving.times;
  trace.points.reserve(n + 1);
  trace.capacity.reserve(n + 1);
  trace.points.push_back(0.0);
  trace.capacity.push_back(0.0);
  for (std::size_t k = 1; k <= n; ++k) {
    trace.points.push_back(zipper.push(driving.values[k], driving.times[k] - driving.times[k - 1]));
    trace.capacity.push_back(zipper.capacity());
  }
  return trace;
}

LoewnerTrace sle_trace(double kappa, std::size_t n, double dt, Engine& rng, Parametrization p,
                       ZipperOptions options) {
  return trace_from_driving(DrivingFunction::brownian(kappa, n, dt, rng, p), options);
}

double hcap_estimate(const LoewnerTrace& trace) {
  if (trace.capacity.empty()) throw Error(ErrorCode::InvalidArgument, "empty trace");
  return trace.capacity.back();
}

bool MartingaleReport::passed(double z_threshold) const {
  return std::isfinite(z_score) && std::abs(z_score) <= z_threshold;
}

namespace {

struct FlowState {
  double x, y, integral;
  bool stopped = false;
};

struct MomentSums {
  double sum = 0.0, sum_sq = 0.0;
  std::uint64_t units = 0, paths = 0, stopped = 0, halvings = 0;
};

class PathStepper {
 public:
  PathStepper(const MartingaleOptions& opt, Engine& rng, MomentSums& sums)
      : opt_(opt), rng_(rng), sums_(sums) {}

  // Euler step of length h with Brownian increment dw. A step that would put
  // X below 0 or above Y is split at a Brownian-bridge midpoint.
  void advance(FlowState& s, double h, double dw, int depth) {
    if (s.stopped) return;
    const double xn = s.x + h / s.x + dw;
    const double yn = s.y + h / s.y + dw;
    if (xn > 0.0 && yn > xn) {
      const double v = 1.0 / s.x - 1.0 / s.y;
      s.integral += v * v * h;
      s.x = xn;
      s.y = yn;
      if (s.x < opt_.stop_level) s.stopped = true;
      return;
    }
    if (depth >= opt_.max_halvings) {
      throw Error(ErrorCode::StepTooLarge, "positivity guard exhausted near X = 0");
    }
    ++sums_.halvings;
    const double mid = 0.5 * dw + std::sqrt(0.25 * h) * normal_(rng_);
    advance(s, 0.5 * h, mid, depth + 1);
    advance(s, 0.5 * h, dw - mid, depth + 1);
  }

 private:
  const MartingaleOptions& opt_;
  Engine& rng_;
  MomentSums& sums_;
  NormalSampler normal_;
};

constexpr std::uint64_t kPathsPerTask = 256;

}  // namespace

MartingaleReport martingale_check(double x, double y, double T, double dt, std::uint64_t n_paths,
                                  std::uint64_t seed, MartingaleOptions options) {
  if (!(x > 0.0 && x < y && std::isfinite(y))) {
    throw Error(ErrorCode::OrderViolation, "need 0 < x < y");
  }
  if (!(T >= 0.0) || !(dt > 0.0) || n_paths == 0) {
    throw Error(ErrorCode::InvalidArgument, "need T >= 0, dt > 0, n_paths >= 1");
  }
  const auto start = std::chrono::steady_clock::now();
  const auto full_steps = static_cast<std::uint64_t>(std::floor(T / dt + 1e-9));
  const double tail = std::max(0.0, T - static_cast<double>(full_steps) * dt);
  const std::uint64_t n_tasks = (n_paths + kPathsPerTask - 1) / kPathsPerTask;

  const auto parts = parallel_map(static_cast<std::size_t>(n_tasks), [&](std::size_t task) {
    Engine rng = make_stream(seed, task);
    MomentSums sums;
    PathStepper stepper(options, rng, sums);
    NormalSampler normal;
    const std::uint64_t begin = task * kPathsPerTask;
    const std::uint64_t count = std::min<std::uint64_t>(kPathsPerTask, n_paths - begin);
    const int copies = options.antithetic ? 2 : 1;
    for (std::uint64_t unit = 0; unit < count; unit += static_cast<std::uint64_t>(copies)) {
      const int here = static_cast<int>(std::min<std::uint64_t>(copies, count - unit));
      FlowState state[2] = {{x, y, 0.0}, {x, y, 0.0}};
      auto step_all = [&](double h) {
        const double dw = std::sqrt(h) * normal(rng);
        for (int c = 0; c < here; ++c) stepper.advance(state[c], h, c == 0 ? dw : -dw, 0);
      };
      for (std::uint64_t k = 0; k < full_steps; ++k) step_all(dt);
      if (tail > 1e-15 * dt) step_all(tail);
      double value = 0.0;
      for (int c = 0; c < here; ++c) {
        value += std::exp(-state[c].integral) * avoid_phi(state[c].x / state[c].y);
        sums.stopped += state[c].stopped ? 1 : 0;
      }
      value /= here;
      sums.sum += value;
      sums.sum_sq += value * value;
      ++sums.units;
      sums.paths += static_cast<std::uint64_t>(here);
    }
    return sums;
  });

  MomentSums total;
  for (const MomentSums& s : parts) {
    total.sum += s.sum;
    total.sum_sq += s.sum_sq;
    total.units += s.units;
    total.paths += s.paths;
    total.stopped += s.stopped;
    total.halvings += s.halvings;
  }
  MartingaleReport r;
  r.x = x;
  r.y = y;
  r.T = T;
  r.dt = dt;
  r.n_paths = total.paths;
  r.seed = seed;
  r.target = sle2_avoid_probability(x, y);
  const double units = static_cast<double>(total.units);
  r.estimate = total.sum / units;
  const double var =
      units > 1 ? std::max(0.0, (total.sum_sq - units * r.estimate * r.estimate) / (units - 1)) : 0.0;
  r.std_error = std::sqrt(var / units);
  const double diff = r.estimate - r.target;
  r.z_score = r.std_error > 0.0 ? diff / r.std_error : (std::abs(diff) <= 1e-12 ? 0.0 : std::numeric_limits<double>::infinity());
  r.stopped_paths = total.stopped;
  r.halvings = total.halvings;
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace fominlab
