#include "decent/incentive.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "decent/error.hpp"

namespace decent {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double scheduled(double coefficient, RewardSchedule schedule, double total) {
  return schedule == RewardSchedule::constant ? coefficient : coefficient / total;
}

void require_non_negative(double value, const char* name) {
  require(std::isfinite(value) && value >= 0.0, ErrorKind::domain, std::string(name) + " must be a non-negative number");
}

// Indices of the `elected` largest nodes; ties go to the lower index.
std::vector<bool> elected_set(const PowerVector& pv, std::size_t elected) {
  std::vector<std::size_t> order(pv.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pv[a] > pv[b]; });
  std::vector<bool> in(pv.size(), false);
  for (std::size_t i = 0; i < std::min(elected, order.size()); ++i) in[order[i]] = true;
  return in;
}

}  // namespace

std::string model_name(const IncentiveModel& model) {
  return std::visit(overloaded{
                        [](const PowModel&) { return std::string("pow"); },
                        [](const PosModel&) { return std::string("pos"); },
                        [](const DposModel&) { return std::string("dpos"); },
                        [](const GammaModel&) { return std::string("gamma"); },
                        [](const LinearModel&) { return std::string("linear"); },
                    },
                    model);
}

void validate(const IncentiveModel& model) {
  std::visit(overloaded{
                 [](const PowModel& m) {
                   require_non_negative(m.block_reward, "block reward");
                   require_non_negative(m.electricity_cost, "electricity cost");
                   require_non_negative(m.node_cost, "node cost");
                 },
                 [](const PosModel& m) {
                   require_non_negative(m.block_reward, "block reward");
                   require_non_negative(m.node_cost, "node cost");
                   require_non_negative(m.min_stake, "minimum stake");
                 },
                 [](const DposModel& m) {
                   require_non_negative(m.block_reward, "block reward");
                   require_non_negative(m.node_cost, "node cost");
                   require(m.elected >= 1, ErrorKind::domain, "number of elected nodes must be positive");
                 },
                 [](const GammaModel& m) {
                   require_non_negative(m.block_reward, "block reward");
                   require_non_negative(m.gamma, "gamma");
                 },
                 [](const LinearModel& m) {
                   require(std::isfinite(m.k) && m.k > 0.0, ErrorKind::domain, "linear coefficient k must be positive");
                 },
             },
             model);
}

bool is_lottery(const IncentiveModel& model) noexcept {
  return std::holds_alternative<PowModel>(model) || std::holds_alternative<PosModel>(model) ||
         std::holds_alternative<GammaModel>(model);
}

std::vector<Utility> utilities(const IncentiveModel& model, const PowerVector& pv) {
  const double total = pv.total();
  std::vector<Utility> out(pv.size());
  std::visit(overloaded{
                 [&](const PowModel& m) {
                   for (std::size_t i = 0; i < pv.size(); ++i)
                     out[i] = m.block_reward * pv[i] / total - m.electricity_cost * pv[i] - m.node_cost;
                 },
                 [&](const PosModel& m) {
                   for (std::size_t i = 0; i < pv.size(); ++i) {
                     if (pv[i] >= m.min_stake) out[i] = m.block_reward * pv[i] / total - m.node_cost;
                   }
                 },
                 [&](const DposModel& m) {
                   const auto elected = elected_set(pv, m.elected);
                   for (std::size_t i = 0; i < pv.size(); ++i)
                     out[i] = (elected[i] ? m.block_reward : 0.0) - m.node_cost;
                 },
                 [&](const GammaModel& m) {
                   const double reward = scheduled(m.block_reward, m.schedule, total);
                   const auto weights = lottery_weights(model, pv);
                   const double weight_sum = std::accumulate(weights.begin(), weights.end(), 0.0);
                   for (std::size_t i = 0; i < pv.size(); ++i) out[i] = reward * weights[i] / weight_sum;
                 },
                 [&](const LinearModel& m) {
                   const double f = scheduled(m.k, m.schedule, total);
                   for (std::size_t i = 0; i < pv.size(); ++i) out[i] = f * pv[i];
                 },
             },
             model);
  return out;
}

Utility utility(const IncentiveModel& model, std::size_t node, const PowerVector& pv) {
  require(node < pv.size(), ErrorKind::structural,
          "node index " + std::to_string(node) + " out of range for " + std::to_string(pv.size()) + " nodes");
  return utilities(model, pv)[node];
}

std::vector<double> lottery_weights(const IncentiveModel& model, const PowerVector& pv) {
  std::vector<double> w(pv.values().begin(), pv.values().end());
  if (const auto* g = std::get_if<GammaModel>(&model)) {
    if (g->gamma == 0.5) {
      for (auto& x : w) x = std::sqrt(x);
    } else if (g->gamma != 1.0) {
      for (auto& x : w) x = std::pow(x, g->gamma);
    }
  } else {
    require(is_lottery(model), ErrorKind::unsupported, model_name(model) + " rewards are not a block lottery");
  }
  return w;
}

std::vector<double> running_costs(const IncentiveModel& model, const PowerVector& pv) {
  std::vector<double> cost(pv.size(), 0.0);
  std::visit(overloaded{
                 [&](const PowModel& m) {
                   for (std::size_t i = 0; i < pv.size(); ++i) cost[i] = m.electricity_cost * pv[i] + m.node_cost;
                 },
                 [&](const PosModel& m) { std::fill(cost.begin(), cost.end(), m.node_cost); },
                 [&](const DposModel& m) { std::fill(cost.begin(), cost.end(), m.node_cost); },
                 [](const GammaModel&) {},
                 [](const LinearModel&) {},
             },
             model);
  return cost;
}

std::size_t draw_index(std::span<const double> weights, Rng& rng) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  const double target = uniform01(rng) * total;
  double cumulative = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    cumulative += weights[i];
    if (target < cumulative) return i;
  }
  // target can reach the rounded total; fall back to the last positive weight
  for (std::size_t i = weights.size(); i-- > 0;) {
    if (weights[i] > 0.0) return i;
  }
  return weights.size() - 1;
}

RewardDraw sample_reward(const IncentiveModel& model, const PowerVector& pv, Rng& rng) {
  require(is_lottery(model), ErrorKind::unsupported,
          model_name(model) + " rewards are deterministic, not a block lottery");
  if (const auto* pos = std::get_if<PosModel>(&model)) {
    for (std::size_t i = 0; i < pv.size(); ++i) {
      require(pv[i] >= pos->min_stake, ErrorKind::domain,
              "node " + std::to_string(i) + " is below the minimum stake and cannot enter the lottery");
    }
  }
  const auto weights = lottery_weights(model, pv);
  RewardDraw draw;
  draw.winner = draw_index(weights, rng);
  draw.net_rewards = running_costs(model, pv);
  for (auto& x : draw.net_rewards) x = -x;

  double block_reward = 0.0;
  std::visit(overloaded{
                 [&](const PowModel& m) { block_reward = m.block_reward; },
                 [&](const PosModel& m) { block_reward = m.block_reward; },
                 [&](const GammaModel& m) { block_reward = scheduled(m.block_reward, m.schedule, pv.total()); },
                 [](const auto&) {},
             },
             model);
  draw.net_rewards[draw.winner] += block_reward;
  return draw;
}

std::string sybil_name(const SybilCostModel& model) {
  return std::holds_alternative<ZeroSybilCost>(model) ? "zero" : "threshold";
}

double split_gain(const IncentiveModel& incentive, std::span<const double> player_nodes,
                  std::span<const double> context) {
  require(!player_nodes.empty(), ErrorKind::domain, "a player must run at least one node");
  std::vector<double> split(player_nodes.begin(), player_nodes.end());
  split.insert(split.end(), context.begin(), context.end());
  const auto split_u = utilities(incentive, PowerVector(std::move(split)));
  double split_total = 0.0;
  for (std::size_t i = 0; i < player_nodes.size(); ++i) split_total += earnings(split_u[i]);

  std::vector<double> merged{std::accumulate(player_nodes.begin(), player_nodes.end(), 0.0)};
  merged.insert(merged.end(), context.begin(), context.end());
  const double merged_u = earnings(utility(incentive, 0, PowerVector(std::move(merged))));
  return split_total - merged_u;
}

double sybil_cost(const SybilCostModel& model, const IncentiveModel& incentive,
                  std::span<const double> player_nodes, std::span<const double> context) {
  require(!player_nodes.empty(), ErrorKind::domain, "a player must run at least one node");
  if (player_nodes.size() == 1) return 0.0;
  if (const auto* cover = std::get_if<ThresholdCoverCost>(&model)) {
    return std::max(0.0, split_gain(incentive, player_nodes, context)) + cover->margin;
  }
  return 0.0;
}

}  // namespace decent
