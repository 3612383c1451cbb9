#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "decent/core_model.hpp"
#include "decent/incentive.hpp"
#include "decent/parallel.hpp"
#include "decent/random.hpp"

namespace decent {

struct ExplicitInit {
  std::vector<double> powers;
};

// alpha_i proportional to i^(-exponent), i = 1..n, scaled to mean 1.
struct PowerLawInit {
  double exponent = 2.0;
};

// `rich` nodes of power 1 followed by `poor` nodes of power f.
struct TwoPointInit {
  double f = 0.5;
  std::size_t rich = 1;
  std::size_t poor = 1;
};

using InitSpec = std::variant<ExplicitInit, PowerLawInit, TwoPointInit>;

// Initial powers for `n_nodes` nodes. Throws structural when an explicit or
// two-point spec disagrees with n_nodes.
std::vector<double> initial_powers(const InitSpec& init, std::size_t n_nodes);

struct SimConfig {
  IncentiveModel model = GammaModel{1.0, 0.5};
  RewardParams reward;
  std::size_t horizon = 1000;
  std::size_t n_nodes = 2;
  InitSpec init = PowerLawInit{};
  std::vector<std::uint64_t> seeds{1};
  double epsilon = 0.1;
  double delta = 0.0;

  void validate() const;
};

// One seed's run. Row t of `fractions` holds beta_i = alpha_i / sum(alpha)
// after t steps; row 0 is the initial state.
struct Trajectory {
  std::uint64_t seed = 0;
  std::size_t nodes = 0;
  std::vector<double> fractions;        // (steps() + 1) x nodes, row-major
  std::vector<double> ratios;           // alpha_max / alpha_delta per row
  std::vector<std::size_t> winners;     // one per step
  std::vector<double> final_powers;

  std::size_t steps() const noexcept { return winners.size(); }
  std::span<const double> row(std::size_t t) const { return {fractions.data() + t * nodes, nodes}; }
};

// One time unit: the lottery winner gains r * clamp(net reward, 0, R_max);
// every other node keeps its power.
PowerVector step(const PowerVector& state, const IncentiveModel& model, const RewardParams& reward, Rng& rng);

// Runs every seed in config.seeds; results are in seed order and do not
// depend on the thread count.
std::vector<Trajectory> simulate(const SimConfig& config, unsigned threads = default_threads());

Trajectory simulate_one(const SimConfig& config, std::uint64_t seed);

// Final 10% of the horizon, at least one step.
std::size_t default_window(std::size_t horizon) noexcept;

struct EdVerdict {
  double converged_fraction = 0.0;
  std::size_t converged = 0;
  std::size_t trajectories = 0;
  double mean_final_ratio = 0.0;
};

// A seed converges when beta_max / beta_delta <= 1 + epsilon at every one of
// the last `window` steps.
EdVerdict ed_verdict(std::span<const Trajectory> trajectories, double epsilon, double delta, std::size_t window);

struct SlopeEstimate {
  double slope = 0.0;
  double standard_error = 0.0;
};

struct MonotonicityStats {
  SlopeEstimate beta_min;
  SlopeEstimate beta_max;
  std::size_t seeds = 0;
};

inline constexpr std::size_t kMinMonotonicitySeeds = 30;

// Least-squares slopes over t of the cross-seed mean of the smallest and the
// largest fraction. The standard error is the spread of per-seed slopes
// divided by sqrt(seeds).
MonotonicityStats monotonicity_stats(std::span<const Trajectory> trajectories);

struct MeanEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
};

// Cross-seed mean of each beta_i at step t.
std::vector<MeanEstimate> fraction_means(std::span<const Trajectory> trajectories, std::size_t t);

}  // namespace decent
