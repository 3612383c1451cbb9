#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "decent/core_model.hpp"
#include "decent/incentive.hpp"
#include "decent/random.hpp"

namespace decent {

// Relative tolerance used when comparing total utilities.
inline constexpr double kUtilityTolerance = 1e-9;

// True when `candidate` beats `baseline` by more than the relative tolerance.
bool strictly_exceeds(double candidate, double baseline, double tolerance = kUtilityTolerance);

struct SearchLimits {
  std::size_t grid = 20;      // grid points per degree of freedom
  std::size_t max_nodes = 6;  // largest state the brute-force search accepts
};

// At least m nodes earn a positive net profit.
struct GrResult {
  bool holds = false;
  std::size_t earning_nodes = 0;
  int m = 1;
};

GrResult check_gr(const IncentiveModel& model, const PowerVector& pv, int m);

// Nodes of distinct players (merged_nodes) pooling their power into the
// surviving subset, with `allocation` giving the surviving nodes' powers.
struct MergeWitness {
  std::vector<std::size_t> merged_nodes;
  std::vector<std::size_t> surviving_nodes;
  std::vector<double> allocation;
  double separate_total = 0.0;  // utility of merged_nodes before the merge
  double merged_total = 0.0;    // utility of surviving_nodes after it

  double gain() const noexcept { return merged_total - separate_total; }
};

struct NdResult {
  bool holds = true;
  std::optional<MergeWitness> witness;  // best violating merge
  std::size_t configurations = 0;       // re-allocations evaluated
};

// Non-delegation: no set of distinct-player nodes profits from merging into
// fewer nodes that leave fewer than m players running nodes.
NdResult check_nd(const IncentiveModel& model, const PowerVector& pv, const PlayerMap& pm, int m,
                  const SearchLimits& limits = {});

// Recomputes a merge from scratch and fills in both totals.
MergeWitness evaluate_merge(const IncentiveModel& model, const PowerVector& pv, MergeWitness merge);

// A player running its effective power as `parts` instead of one node.
struct SplitWitness {
  PlayerId player;
  std::vector<double> parts;
  double single_utility = 0.0;
  double split_utility = 0.0;  // sum over the parts
  double sybil_cost = 0.0;

  double gain() const noexcept { return split_utility - sybil_cost - single_utility; }
};

struct NsResult {
  bool holds = true;
  std::optional<SplitWitness> witness;  // most profitable violating split
  std::size_t configurations = 0;
};

// No-Sybil: players at or above the delta-th percentile of effective power
// never profit from running several nodes.
NsResult check_ns(const IncentiveModel& model, const SybilCostModel& sybil, const PowerVector& pv,
                  const PlayerMap& pm, double delta, const SearchLimits& limits = {});

// Utility of `player` running `parts` against every other player's nodes.
SplitWitness evaluate_split(const IncentiveModel& model, const SybilCostModel& sybil, const PowerVector& pv,
                            const PlayerMap& pm, const PlayerId& player, std::vector<double> parts);

struct LinearityResult {
  bool is_linear = false;
  double max_violation = 0.0;  // largest relative spread of U_i / alpha_i in one state
  std::size_t trials = 0;
};

// Samples random states of a fixed total power and checks U_i proportional to alpha_i.
LinearityResult check_linearity(const IncentiveModel& model, std::size_t trials, Rng& rng);

struct ConditionReport {
  GrResult gr;
  NdResult nd;
  NsResult ns;
  // Even distribution is a limit statement; it is decided empirically by the
  // dynamics simulator.
  std::string ed = "deferred";
};

}  // namespace decent
