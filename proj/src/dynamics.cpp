#include "decent/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "decent/error.hpp"

namespace decent {
namespace {

double ols_slope(std::span<const double> y) {
  const std::size_t n = y.size();
  if (n < 2) return 0.0;
  const double t_mean = static_cast<double>(n - 1) / 2.0;
  double y_mean = 0.0;
  for (double v : y) y_mean += v;
  y_mean /= static_cast<double>(n);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const double dt = static_cast<double>(t) - t_mean;
    sxy += dt * (y[t] - y_mean);
    sxx += dt * dt;
  }
  return sxy / sxx;
}

SlopeEstimate summarize_slopes(std::span<const double> per_seed, std::span<const double> mean_curve) {
  SlopeEstimate out;
  out.slope = ols_slope(mean_curve);
  const double n = static_cast<double>(per_seed.size());
  if (per_seed.size() < 2) return out;
  const double mean = std::accumulate(per_seed.begin(), per_seed.end(), 0.0) / n;
  double ss = 0.0;
  for (double s : per_seed) ss += (s - mean) * (s - mean);
  out.standard_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  return out;
}

double row_ratio(std::span<const double> row, double delta) {
  const double top = *std::max_element(row.begin(), row.end());
  return top / percentile_power(row, delta);
}

}  // namespace

std::vector<double> initial_powers(const InitSpec& init, std::size_t n_nodes) {
  require(n_nodes >= 1, ErrorKind::structural, "n_nodes must be at least 1");
  std::vector<double> powers;
  if (const auto* e = std::get_if<ExplicitInit>(&init)) {
    require(e->powers.size() == n_nodes, ErrorKind::structural,
            "explicit init lists " + std::to_string(e->powers.size()) + " powers for " + std::to_string(n_nodes) +
                " nodes");
    powers = e->powers;
  } else if (const auto* p = std::get_if<PowerLawInit>(&init)) {
    require(std::isfinite(p->exponent), ErrorKind::domain, "power-law exponent must be finite");
    powers.resize(n_nodes);
    for (std::size_t i = 0; i < n_nodes; ++i) powers[i] = std::pow(static_cast<double>(i + 1), -p->exponent);
    const double mean = std::accumulate(powers.begin(), powers.end(), 0.0) / static_cast<double>(n_nodes);
    for (auto& x : powers) x /= mean;
  } else {
    const auto& t = std::get<TwoPointInit>(init);
    require(t.f > 0.0 && t.f <= 1.0, ErrorKind::domain, "two-point f must lie in (0, 1]");
    require(t.rich + t.poor == n_nodes, ErrorKind::structural, "two-point counts must add up to n_nodes");
    powers.assign(t.rich, 1.0);
    powers.insert(powers.end(), t.poor, t.f);
  }
  PowerVector check(powers);
  return powers;
}

void SimConfig::validate() const {
  decent::validate(model);
  require(is_lottery(model), ErrorKind::unsupported, model_name(model) + " is not a block lottery");
  reward.validate();
  require(!seeds.empty(), ErrorKind::domain, "at least one seed is required");
  require(epsilon >= 0.0, ErrorKind::domain, "epsilon must be non-negative");
  require(delta >= 0.0 && delta <= 100.0, ErrorKind::domain, "delta must lie in [0, 100]");
  initial_powers(init, n_nodes);
}

namespace {

PowerVector advance(const PowerVector& state, const IncentiveModel& model, const RewardParams& reward, Rng& rng,
                    std::size_t& winner) {
  const auto draw = sample_reward(model, state, rng);
  std::vector<double> next(state.values().begin(), state.values().end());
  const double net = std::clamp(draw.net_rewards[draw.winner], 0.0, reward.r_max);
  next[draw.winner] += reward.r * net;
  winner = draw.winner;
  return PowerVector(std::move(next));
}

}  // namespace

PowerVector step(const PowerVector& state, const IncentiveModel& model, const RewardParams& reward, Rng& rng) {
  std::size_t winner = 0;
  return advance(state, model, reward, rng, winner);
}

Trajectory simulate_one(const SimConfig& config, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0));
  PowerVector state(initial_powers(config.init, config.n_nodes));
  Trajectory out;
  out.seed = seed;
  out.nodes = config.n_nodes;
  out.fractions.reserve((config.horizon + 1) * config.n_nodes);
  out.ratios.reserve(config.horizon + 1);
  out.winners.reserve(config.horizon);

  auto record = [&] {
    const double total = state.total();
    const std::size_t start = out.fractions.size();
    for (double a : state.values()) out.fractions.push_back(a / total);
    out.ratios.push_back(row_ratio({out.fractions.data() + start, config.n_nodes}, config.delta));
  };
  record();
  for (std::size_t t = 0; t < config.horizon; ++t) {
    std::size_t winner = 0;
    state = advance(state, config.model, config.reward, rng, winner);
    out.winners.push_back(winner);
    record();
  }
  out.final_powers.assign(state.values().begin(), state.values().end());
  return out;
}

std::vector<Trajectory> simulate(const SimConfig& config, unsigned threads) {
  config.validate();
  std::vector<Trajectory> out(config.seeds.size());
  parallel_for(out.size(), threads, [&](std::size_t i) { out[i] = simulate_one(config, config.seeds[i]); });
  return out;
}

std::size_t default_window(std::size_t horizon) noexcept { return std::max<std::size_t>(1, horizon / 10); }

EdVerdict ed_verdict(std::span<const Trajectory> trajectories, double epsilon, double delta, std::size_t window) {
  require(!trajectories.empty(), ErrorKind::domain, "ed_verdict needs at least one trajectory");
  require(epsilon >= 0.0, ErrorKind::domain, "epsilon must be non-negative");
  EdVerdict out;
  out.trajectories = trajectories.size();
  double ratio_sum = 0.0;
  for (const auto& tr : trajectories) {
    const std::size_t horizon = tr.steps();
    require(window >= 1, ErrorKind::domain, "window must be at least one step");
    require(window <= horizon, ErrorKind::domain,
            "window of " + std::to_string(window) + " steps exceeds the horizon of " + std::to_string(horizon));
    bool converged = true;
    for (std::size_t t = horizon - window + 1; t <= horizon && converged; ++t) {
      converged = row_ratio(tr.row(t), delta) <= 1.0 + epsilon;
    }
    if (converged) ++out.converged;
    ratio_sum += row_ratio(tr.row(horizon), delta);
  }
  const double n = static_cast<double>(out.trajectories);
  out.converged_fraction = static_cast<double>(out.converged) / n;
  out.mean_final_ratio = ratio_sum / n;
  return out;
}

MonotonicityStats monotonicity_stats(std::span<const Trajectory> trajectories) {
  require(trajectories.size() >= kMinMonotonicitySeeds, ErrorKind::domain,
          "monotonicity statistics need at least " + std::to_string(kMinMonotonicitySeeds) + " seeds");
  const std::size_t rows = trajectories.front().steps() + 1;
  for (const auto& tr : trajectories) {
    require(tr.steps() + 1 == rows, ErrorKind::structural, "trajectories must share one horizon");
  }
  std::vector<double> mean_min(rows, 0.0), mean_max(rows, 0.0);
  std::vector<double> slopes_min, slopes_max;
  std::vector<double> cur_min(rows), cur_max(rows);
  for (const auto& tr : trajectories) {
    for (std::size_t t = 0; t < rows; ++t) {
      const auto r = tr.row(t);
      const auto [lo, hi] = std::minmax_element(r.begin(), r.end());
      cur_min[t] = *lo;
      cur_max[t] = *hi;
      mean_min[t] += *lo;
      mean_max[t] += *hi;
    }
    slopes_min.push_back(ols_slope(cur_min));
    slopes_max.push_back(ols_slope(cur_max));
  }
  const double n = static_cast<double>(trajectories.size());
  for (std::size_t t = 0; t < rows; ++t) {
    mean_min[t] /= n;
    mean_max[t] /= n;
  }
  MonotonicityStats out;
  out.seeds = trajectories.size();
  out.beta_min = summarize_slopes(slopes_min, mean_min);
  out.beta_max = summarize_slopes(slopes_max, mean_max);
  return out;
}

std::vector<MeanEstimate> fraction_means(std::span<const Trajectory> trajectories, std::size_t t) {
  require(!trajectories.empty(), ErrorKind::domain, "fraction_means needs at least one trajectory");
  const std::size_t nodes = trajectories.front().nodes;
  std::vector<MeanEstimate> out(nodes);
  const double n = static_cast<double>(trajectories.size());
  for (std::size_t i = 0; i < nodes; ++i) {
    double sum = 0.0;
    for (const auto& tr : trajectories) {
      require(t <= tr.steps() && tr.nodes == nodes, ErrorKind::domain, "step beyond the trajectory horizon");
      sum += tr.row(t)[i];
    }
    const double mean = sum / n;
    double ss = 0.0;
    for (const auto& tr : trajectories) ss += (tr.row(t)[i] - mean) * (tr.row(t)[i] - mean);
    out[i].mean = mean;
    out[i].standard_error = trajectories.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  }
  return out;
}

}  // namespace decent
