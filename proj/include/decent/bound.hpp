#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "decent/parallel.hpp"
#include "decent/random.hpp"

namespace decent {

enum class WalkStrategy {
  micro,     // poor gains a factor (1 + u) per step
  max_step,  // poor gains rho (absolute) per step
  hybrid,    // poor closes the gap of each line in n_jump equal factors
};

std::string to_string(WalkStrategy s);
WalkStrategy parse_strategy(const std::string& name);

struct WalkParams {
  double f = 1e-4;
  double rho = 0.1;
  double epsilon = 0.0;
  double u = 1e-3;
  std::size_t k_max = 100;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 1;
  WalkStrategy strategy = WalkStrategy::micro;
  std::size_t n_jump = 1;
  double budget = 1e10;  // cap on samples * k_max

  void validate() const;
};

// Rich power a (starts at 1) and poor power b (starts at f), both normalised
// by the rich node's initial power. k counts rich gains; b_line is the poor
// power on arrival at the current line.
struct WalkState {
  double a = 1.0;
  double b = 1.0;
  std::size_t k = 0;
  double b_line = 1.0;

  static WalkState initial(double f) { return {1.0, f, 0, f}; }
  bool succeeded(double epsilon) const noexcept { return a <= (1.0 + epsilon) * b; }
};

// Probability that the poor node closes the whole gap in one uncapped jump
// before the rich node gains again. 1 once the target ratio is met.
double jump_prob(const WalkState& s, double epsilon, double rho);

// Probability that the next elementary step goes to the poor node.
double poor_step_prob(const WalkState& s, const WalkParams& p);

// One elementary step of the chosen strategy.
WalkState walk_step(const WalkState& s, const WalkParams& p, Rng& rng);

struct BoundEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::vector<double> contributions;  // mass added at line k, k = 0..k_max
  std::vector<double> contribution_se;
  double success_fraction = 0.0;      // samples whose walk reached the target
  std::uint64_t samples = 0;
};

// Monte Carlo estimate of the catch-up probability bound. Each sample scores
// 1 - prod_k (1 - J_k) over its line arrivals, or 1 when the walk reaches the
// target ratio. Identical for any thread count.
BoundEstimate estimate_g(const WalkParams& p, unsigned threads = default_threads());

struct P0Estimate {
  double value = 0.0;
  double standard_error = 0.0;
  double bound = 0.0;  // (1 + epsilon) * f
};

// Success mass of the estimator with no rich gain.
P0Estimate p0_fraction(const WalkParams& p, unsigned threads = default_threads());

struct SweepGrid {
  std::vector<double> f;
  std::vector<double> epsilon;
  std::vector<double> rho;
};

struct SweepRow {
  double f = 0.0;
  double epsilon = 0.0;
  double rho = 0.0;
  double estimate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

// Rows ordered by rho, then epsilon, then f. Every cell reuses base.seed so
// neighbouring cells share random numbers.
std::vector<SweepRow> sweep(const SweepGrid& grid, const WalkParams& base, unsigned threads = default_threads());

// Adjacent pairs along f (fixed epsilon, rho) and along epsilon (fixed f,
// rho) whose estimates decrease by more than their intervals allow.
std::size_t monotonicity_violations(const std::vector<SweepRow>& rows);

struct RealWorldAnchors {
  double f0 = 7.58e-9;
  double f15 = 1.44e-5;
  double f50 = 6.27e-5;
  double rho = 9.5e-4;
};

RealWorldAnchors real_world_anchors() noexcept;

}  // namespace decent
