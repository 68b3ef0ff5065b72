#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "fominlab/mobius.hpp"
#include "fominlab/rng.hpp"

namespace fominlab {

/// Standard: dg/dt = 2 / (g - sqrt(kappa) W), hcap = 2t.
/// CapacityOverKappa: dg/dt = (2/kappa) / (g - W), hcap = 2t / kappa.
enum class Parametrization { Standard, CapacityOverKappa };

/// The constant a in dg/dt = a / (g - U); capacity grows at rate a.
double capacity_rate(Parametrization p, double kappa);

/// Driving values on a time grid. Within step k the driving value is frozen at
/// values[k], so the step is the exact vertical-slit map
/// g -> U + sqrt((g - U)^2 + 2 a dt): the flow is square-root continuous in
/// time at each step and capacity-additive.
struct DrivingFunction {
  std::vector<double> times;   // t_0 = 0 < t_1 < ... < t_N
  std::vector<double> values;  // U(t_0) = 0, ..., U(t_N)
  double kappa = 0.0;
  Parametrization parametrization = Parametrization::Standard;

  std::size_t steps() const noexcept { return times.empty() ? 0 : times.size() - 1; }
  double rate() const { return capacity_rate(parametrization, kappa); }
  void validate() const;

  static DrivingFunction zero(std::size_t n, double dt, double kappa = 0.0,
                              Parametrization p = Parametrization::Standard);
  /// sqrt(kappa) W on a uniform grid (plain W for CapacityOverKappa).
  static DrivingFunction brownian(double kappa, std::size_t n, double dt, Engine& rng,
                                  Parametrization p = Parametrization::Standard);
};

struct Swallowed {
  double time = 0.0;
};

using ForwardResult = std::variant<Complex, Swallowed>;

/// g_T(z). Points in the closed upper half-plane except 0.
ForwardResult solve_forward(Complex z, const DrivingFunction& driving, double T);

/// Threshold on |g - U| below which a point is declared swallowed.
inline constexpr double kSwallowThreshold = 1e-8;

/// One vertical-slit step and its inverse, branch chosen to stay in the
/// closed upper half-plane (real points keep their side of U).
Complex slit_step(Complex g, double u, double c);
Complex slit_step_inverse(Complex w, double u, double c);

struct LoewnerTrace {
  std::vector<double> times;
  std::vector<Complex> points;   // gamma(t_k), gamma(t_0) = 0
  std::vector<double> capacity;  // hcap(gamma(0, t_k])
};

struct ZipperOptions {
  bool fast = true;           // false: compose every step exactly, O(N^2)
  int branching = 4;          // steps per block at each level, a power of two
  int terms = 20;             // Laurent terms per block
  int samples = 40;           // points on the sampling circle
  double sample_radius = 1.4; // |zeta| of the sampling circle
  double far_field = 1.8;     // minimum |zeta| at which a block series is used
};

/// Incremental backward composition gamma_n = h_1^{-1} o ... o h_n^{-1}(U_n).
///
/// In fast mode consecutive steps are grouped into blocks of size B^L. A
/// completed block's composed inverse map F is analytic off a real interval
/// [l, r]; with the Joukowski variable w = C + R (zeta + 1/zeta) / 2 it is
/// stored as F(w) = w + sum_n a_n zeta^{-n} and used whenever the evaluation
/// point is far from [l, r].
class Zipper {
 public:
  explicit Zipper(double rate, ZipperOptions options = {});

  /// Appends a step with driving value u over dt and returns the new tip.
  Complex push(double u, double dt);

  Complex tip() const noexcept { return tip_; }
  std::size_t steps() const noexcept { return u_.size(); }
  double capacity() const noexcept { return capacity_; }

  /// h_1^{-1} o ... o h_n^{-1}(w) over all pushed steps, w in the closed
  /// upper half-plane.
  Complex inverse_map(Complex w) const;

 private:
  struct Level {
    std::size_t size = 0;  // steps per block
    std::vector<double> center, radius, coef;
  };

  Complex apply_range(std::size_t begin, std::size_t end, Complex w) const;
  bool try_series(const Level& level, std::size_t index, Complex w, Complex& out) const;
  void build_block(std::size_t level, std::size_t index);

  double rate_;
  ZipperOptions opt_;
  std::vector<double> u_, c_;
  std::vector<Level> levels_;  // levels_[L - 1] holds blocks of B^L steps
  std::vector<Complex> sample_points_;
  std::vector<Complex> fourier_;
  std::size_t log2_branching_ = 3;
  static constexpr int kTruncationLevels = 6;
  double truncation_norm_[kTruncationLevels] = {};
  int truncation_terms_[kTruncationLevels] = {};
  double capacity_ = 0.0;
  Complex tip_{};
};

LoewnerTrace trace_from_driving(const DrivingFunction& driving, ZipperOptions options = {});

/// SLE_kappa trace with N uniform steps of size dt, N + 1 points.
LoewnerTrace sle_trace(double kappa, std::size_t n, double dt, Engine& rng,
                       Parametrization p = Parametrization::Standard,
                       ZipperOptions options = {});

/// hcap of the traced curve: the 1/z coefficient b(t) of the composed map,
/// which for slit steps is the sum of the per-step coefficients c_k / 2.
double hcap_estimate(const LoewnerTrace& trace);

struct MartingaleOptions {
  bool antithetic = false;
  double stop_level = 1e-4;  // paths stop once X drops below this
  int max_halvings = 40;
};

struct MartingaleReport {
  double x = 0.0, y = 0.0, T = 0.0, dt = 0.0;
  std::uint64_t n_paths = 0;
  std::uint64_t seed = 0;
  double target = 0.0;  // phi(x / y)
  double estimate = 0.0;
  double std_error = 0.0;
  double z_score = 0.0;
  std::uint64_t stopped_paths = 0;
  std::uint64_t halvings = 0;
  double wall_seconds = 0.0;

  bool passed(double z_threshold = 4.0) const;
};

/// Simulates dX = dt/X + dW, dY = dt/Y + dW from (x, y) up to T and estimates
/// E[J_T phi(X_T / Y_T)] with J_t = exp(-int_0^t (1/X - 1/Y)^2 ds).
MartingaleReport martingale_check(double x, double y, double T, double dt, std::uint64_t n_paths,
                                  std::uint64_t seed, MartingaleOptions options = {});

}  // namespace fominlab
