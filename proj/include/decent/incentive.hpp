#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "decent/core_model.hpp"
#include "decent/random.hpp"

namespace decent {

// How a reward coefficient scales with the total committed power. Models with
// a reward that shrinks as total power grows use inverse_total.
enum class RewardSchedule { constant, inverse_total };

// Block reward proportional to power, minus an electricity bill per unit of
// power and a fixed node cost.
struct PowModel {
  double block_reward = 0.0;
  double electricity_cost = 0.0;
  double node_cost = 0.0;
};

// Stake-proportional reward; a node below the minimum stake cannot run.
struct PosModel {
  double block_reward = 0.0;
  double node_cost = 0.0;
  double min_stake = 0.0;
};

// The `elected` largest nodes each earn the full block reward.
struct DposModel {
  double block_reward = 0.0;
  double node_cost = 0.0;
  std::size_t elected = 1;
};

// Winning probability proportional to power^gamma. gamma = 0.5 is the
// square-root scheme, gamma = 1 is proportional.
struct GammaModel {
  double block_reward = 0.0;
  double gamma = 1.0;
  RewardSchedule schedule = RewardSchedule::constant;
};

// U_i = F(total) * alpha_i with F = k or F = k / total.
struct LinearModel {
  double k = 1.0;
  RewardSchedule schedule = RewardSchedule::inverse_total;
};

using IncentiveModel = std::variant<PowModel, PosModel, DposModel, GammaModel, LinearModel>;

std::string model_name(const IncentiveModel& model);
void validate(const IncentiveModel& model);

// Models that allocate one block per time unit by lottery.
bool is_lottery(const IncentiveModel& model) noexcept;

// Expected net profit per time unit of a node. std::nullopt marks a node that
// cannot run at all (a PoS node below the minimum stake).
using Utility = std::optional<double>;

Utility utility(const IncentiveModel& model, std::size_t node, const PowerVector& pv);

// Utilities of every node, evaluated in one pass.
std::vector<Utility> utilities(const IncentiveModel& model, const PowerVector& pv);

// Utility with a non-running node counted as earning nothing.
inline double earnings(const Utility& u) noexcept { return u.value_or(0.0); }

struct RewardDraw {
  std::size_t winner = 0;
  std::vector<double> net_rewards;  // winner: b_r - cost, others: -cost
};

// Lottery weight of each node; the winner is drawn proportionally.
std::vector<double> lottery_weights(const IncentiveModel& model, const PowerVector& pv);

// Per-time-unit cost paid by each node whether or not it wins.
std::vector<double> running_costs(const IncentiveModel& model, const PowerVector& pv);

// Draws one block lottery. Throws unsupported for DPoS and Linear models.
RewardDraw sample_reward(const IncentiveModel& model, const PowerVector& pv, Rng& rng);

// Index drawn with probability weights[i] / sum(weights).
std::size_t draw_index(std::span<const double> weights, Rng& rng);

struct ZeroSybilCost {};

// Charges a multi-node set exactly the utility it gains by splitting, plus a
// margin, so splitting is never strictly profitable.
struct ThresholdCoverCost {
  double margin = 0.0;
};

using SybilCostModel = std::variant<ZeroSybilCost, ThresholdCoverCost>;

std::string sybil_name(const SybilCostModel& model);

// Total utility of a player's split nodes minus the utility of the same power
// run as one node, both against `context` (the other players' nodes).
double split_gain(const IncentiveModel& incentive, std::span<const double> player_nodes,
                  std::span<const double> context);

double sybil_cost(const SybilCostModel& model, const IncentiveModel& incentive,
                  std::span<const double> player_nodes, std::span<const double> context);

}  // namespace decent
