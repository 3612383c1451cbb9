#include "decent/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "decent/error.hpp"

namespace decent {
namespace {

// Largest grid for which all compositions of a player's power are enumerated.
constexpr std::size_t kMaxSplitGrid = 24;

void check_bounds(const PowerVector& pv, const PlayerMap& pm, const SearchLimits& limits) {
  require(pv.size() == pm.size(), ErrorKind::structural, "player map and power vector lengths differ");
  require(limits.grid >= 1, ErrorKind::domain, "grid must be positive");
  require(pv.size() <= limits.max_nodes, ErrorKind::search_bound,
          "state has " + std::to_string(pv.size()) + " nodes; the exhaustive search is bounded at " +
              std::to_string(limits.max_nodes));
}

// Calls fn(parts) for every way of writing `units` as an ordered sum of
// `count` positive integers.
template <class Fn>
void for_each_composition(std::size_t units, std::size_t count, Fn&& fn) {
  if (count == 0 || units < count) return;
  std::vector<std::size_t> parts(count);
  auto fill = [&](auto&& self, std::size_t pos, std::size_t left) -> void {
    if (pos + 1 == count) {
      parts[pos] = left;
      fn(parts);
      return;
    }
    for (std::size_t v = 1; v + (count - pos - 1) <= left; ++v) {
      parts[pos] = v;
      self(self, pos + 1, left - v);
    }
  };
  fill(fill, 0, units);
}

std::size_t players_among(const PlayerMap& pm, const std::vector<bool>& running) {
  std::set<PlayerId> players;
  for (std::size_t i = 0; i < pm.size(); ++i) {
    if (running[i]) players.insert(pm[i]);
  }
  return players.size();
}

}  // namespace

bool strictly_exceeds(double candidate, double baseline, double tolerance) {
  const double scale = std::max({std::abs(candidate), std::abs(baseline), std::numeric_limits<double>::min()});
  return candidate - baseline > tolerance * scale;
}

GrResult check_gr(const IncentiveModel& model, const PowerVector& pv, int m) {
  require(m >= 1, ErrorKind::domain, "m must be at least 1");
  GrResult out;
  out.m = m;
  for (const auto& u : utilities(model, pv)) {
    if (u && *u > 0.0) ++out.earning_nodes;
  }
  out.holds = out.earning_nodes >= static_cast<std::size_t>(m);
  return out;
}

MergeWitness evaluate_merge(const IncentiveModel& model, const PowerVector& pv, MergeWitness merge) {
  require(merge.surviving_nodes.size() == merge.allocation.size(), ErrorKind::structural,
          "allocation must give one power per surviving node");
  const auto before = utilities(model, pv);
  merge.separate_total = 0.0;
  for (auto i : merge.merged_nodes) merge.separate_total += earnings(before.at(i));

  std::vector<bool> removed(pv.size(), false);
  for (auto i : merge.merged_nodes) removed.at(i) = true;
  std::vector<double> after_powers;
  std::vector<std::size_t> survivor_slot;
  for (std::size_t i = 0; i < pv.size(); ++i) {
    const auto it = std::find(merge.surviving_nodes.begin(), merge.surviving_nodes.end(), i);
    if (it != merge.surviving_nodes.end()) {
      survivor_slot.push_back(after_powers.size());
      after_powers.push_back(merge.allocation[static_cast<std::size_t>(it - merge.surviving_nodes.begin())]);
    } else if (!removed[i]) {
      after_powers.push_back(pv[i]);
    }
  }
  const auto after = utilities(model, PowerVector(std::move(after_powers)));
  merge.merged_total = 0.0;
  for (auto slot : survivor_slot) merge.merged_total += earnings(after[slot]);
  return merge;
}

NdResult check_nd(const IncentiveModel& model, const PowerVector& pv, const PlayerMap& pm, int m,
                  const SearchLimits& limits) {
  check_bounds(pv, pm, limits);
  require(m >= 1, ErrorKind::domain, "m must be at least 1");
  const std::size_t n = pv.size();
  const auto base = utilities(model, pv);
  NdResult out;

  for (std::uint32_t set_mask = 1; set_mask < (1u << n); ++set_mask) {
    std::vector<std::size_t> members;
    std::set<PlayerId> owners;
    bool distinct = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (set_mask & (1u << i)) {
        members.push_back(i);
        distinct = distinct && owners.insert(pm[i]).second;
      }
    }
    if (!distinct || members.size() < 2) continue;

    double separate = 0.0, pooled = 0.0;
    for (auto i : members) {
      separate += earnings(base[i]);
      pooled += pv[i];
    }

    // Every non-empty proper subset of the members survives the merge.
    const std::uint32_t k_all = (1u << members.size()) - 1;
    for (std::uint32_t keep = 1; keep < k_all; ++keep) {
      std::vector<bool> running(n, true);
      for (auto i : members) running[i] = false;
      std::vector<std::size_t> survivors;
      for (std::size_t b = 0; b < members.size(); ++b) {
        if (keep & (1u << b)) {
          survivors.push_back(members[b]);
          running[members[b]] = true;
        }
      }
      if (players_among(pm, running) >= static_cast<std::size_t>(m)) continue;

      // Positions of the survivors in the post-merge vector.
      std::vector<double> after;
      std::vector<std::size_t> slots;
      for (std::size_t i = 0; i < n; ++i) {
        if (!running[i]) continue;
        if (std::find(survivors.begin(), survivors.end(), i) != survivors.end()) slots.push_back(after.size());
        after.push_back(pv[i]);
      }

      for_each_composition(limits.grid, survivors.size(), [&](const std::vector<std::size_t>& units) {
        std::vector<double> allocation(units.size());
        for (std::size_t s = 0; s < units.size(); ++s) {
          allocation[s] = pooled * static_cast<double>(units[s]) / static_cast<double>(limits.grid);
          after[slots[s]] = allocation[s];
        }
        const auto u = utilities(model, PowerVector(after));
        double merged = 0.0;
        for (auto slot : slots) merged += earnings(u[slot]);
        ++out.configurations;
        if (strictly_exceeds(merged, separate) && (!out.witness || merged - separate > out.witness->gain())) {
          out.holds = false;
          out.witness = MergeWitness{members, survivors, allocation, separate, merged};
        }
      });
    }
  }
  return out;
}

SplitWitness evaluate_split(const IncentiveModel& model, const SybilCostModel& sybil, const PowerVector& pv,
                            const PlayerMap& pm, const PlayerId& player, std::vector<double> parts) {
  require(pv.size() == pm.size(), ErrorKind::structural, "player map and power vector lengths differ");
  require(!parts.empty(), ErrorKind::domain, "a split needs at least one part");
  std::vector<double> context;
  double own = 0.0;
  for (std::size_t i = 0; i < pv.size(); ++i) {
    if (pm[i] == player) {
      own += pv[i];
    } else {
      context.push_back(pv[i]);
    }
  }
  require(own > 0.0, ErrorKind::domain, "player " + player + " runs no node");

  SplitWitness w;
  w.player = player;
  std::vector<double> single{own};
  single.insert(single.end(), context.begin(), context.end());
  w.single_utility = earnings(utility(model, 0, PowerVector(std::move(single))));

  std::vector<double> split = parts;
  split.insert(split.end(), context.begin(), context.end());
  const auto u = utilities(model, PowerVector(std::move(split)));
  for (std::size_t i = 0; i < parts.size(); ++i) w.split_utility += earnings(u[i]);
  w.sybil_cost = sybil_cost(sybil, model, parts, context);
  w.parts = std::move(parts);
  return w;
}

NsResult check_ns(const IncentiveModel& model, const SybilCostModel& sybil, const PowerVector& pv,
                  const PlayerMap& pm, double delta, const SearchLimits& limits) {
  check_bounds(pv, pm, limits);
  require(limits.grid <= kMaxSplitGrid, ErrorKind::search_bound,
          "split grid " + std::to_string(limits.grid) + " exceeds the enumeration bound " +
              std::to_string(kMaxSplitGrid));
  const auto ep = effective_powers(pv, pm);
  std::vector<double> values;
  for (const auto& [p, v] : ep) values.push_back(v);
  const double threshold = percentile_power(values, delta);

  NsResult out;
  const std::size_t grid = limits.grid;
  for (const auto& [player, own] : ep) {
    if (own < threshold) continue;
    std::vector<double> context;
    for (std::size_t i = 0; i < pv.size(); ++i) {
      if (pm[i] != player) context.push_back(pv[i]);
    }
    std::vector<double> single{own};
    single.insert(single.end(), context.begin(), context.end());
    const double single_u = earnings(utility(model, 0, PowerVector(std::move(single))));

    // Each non-zero mask over the grid-1 cut points is a split into 2..grid parts.
    for (std::uint32_t cuts = 1; cuts < (1u << (grid - 1)); ++cuts) {
      std::vector<double> parts;
      std::size_t last = 0;
      for (std::size_t c = 1; c <= grid; ++c) {
        if (c == grid || (cuts & (1u << (c - 1)))) {
          parts.push_back(own * static_cast<double>(c - last) / static_cast<double>(grid));
          last = c;
        }
      }
      std::vector<double> split = parts;
      split.insert(split.end(), context.begin(), context.end());
      const auto u = utilities(model, PowerVector(std::move(split)));
      double split_u = 0.0;
      for (std::size_t i = 0; i < parts.size(); ++i) split_u += earnings(u[i]);
      const double cost = sybil_cost(sybil, model, parts, context);
      ++out.configurations;
      if (strictly_exceeds(split_u - cost, single_u) &&
          (!out.witness || split_u - cost - single_u > out.witness->gain())) {
        out.holds = false;
        out.witness = SplitWitness{player, std::move(parts), single_u, split_u, cost};
      }
    }
  }
  return out;
}

LinearityResult check_linearity(const IncentiveModel& model, std::size_t trials, Rng& rng) {
  require(trials >= 1, ErrorKind::domain, "linearity check needs at least one trial");
  constexpr double kTotal = 10.0;
  LinearityResult out;
  out.trials = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng() % 5);
    std::vector<double> powers(n);
    double sum = 0.0;
    for (auto& x : powers) {
      x = -std::log(uniform01_open_low(rng));  // flat Dirichlet via exponentials
      x = std::max(x, 1e-6);
      sum += x;
    }
    for (auto& x : powers) x *= kTotal / sum;
    const PowerVector pv(std::move(powers));
    const auto u = utilities(model, pv);

    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    bool runs = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (!u[i]) {
        runs = false;
        break;
      }
      const double ratio = *u[i] / pv[i];
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    double violation = std::numeric_limits<double>::infinity();
    if (runs) {
      const double scale = std::max(std::abs(lo), std::abs(hi));
      violation = scale > 0.0 ? (hi - lo) / scale : 0.0;
    }
    out.max_violation = std::max(out.max_violation, violation);
  }
  out.is_linear = out.max_violation <= kUtilityTolerance;
  return out;
}

}  // namespace decent
