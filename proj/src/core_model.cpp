#include "decent/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "decent/error.hpp"

namespace decent {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::structural: return "structural";
    case ErrorKind::domain: return "domain";
    case ErrorKind::search_bound: return "search-bound";
    case ErrorKind::budget: return "budget";
    case ErrorKind::unsupported: return "unsupported";
    case ErrorKind::config: return "config";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::config: return 2;
    case ErrorKind::structural: return 3;
    case ErrorKind::domain: return 4;
    case ErrorKind::search_bound: return 5;
    case ErrorKind::budget: return 6;
    case ErrorKind::unsupported: return 7;
    case ErrorKind::io: return 8;
  }
  return 1;
}

PowerVector::PowerVector(std::vector<double> powers) : powers_(std::move(powers)) {
  require(!powers_.empty(), ErrorKind::domain, "power vector must not be empty");
  for (std::size_t i = 0; i < powers_.size(); ++i) {
    require(std::isfinite(powers_[i]) && powers_[i] > 0.0, ErrorKind::domain,
            "power of node " + std::to_string(i) + " must be a positive finite number");
  }
}

double PowerVector::total() const noexcept { return std::accumulate(powers_.begin(), powers_.end(), 0.0); }

double PowerVector::max() const noexcept { return *std::max_element(powers_.begin(), powers_.end()); }

PlayerMap::PlayerMap(std::vector<PlayerId> owners) : owners_(std::move(owners)) {}

PlayerMap PlayerMap::one_per_node(std::size_t nodes) {
  std::vector<PlayerId> owners;
  owners.reserve(nodes);
  for (std::size_t i = 0; i < nodes; ++i) owners.push_back("p" + std::to_string(i));
  return PlayerMap(std::move(owners));
}

std::size_t PlayerMap::distinct_players() const {
  return std::set<PlayerId>(owners_.begin(), owners_.end()).size();
}

void DecentralizationSpec::validate() const {
  require(m >= 1, ErrorKind::domain, "m must be at least 1");
  require(epsilon >= 0.0, ErrorKind::domain, "epsilon must be non-negative");
  require(delta >= 0.0 && delta <= 100.0, ErrorKind::domain, "delta must lie in [0, 100]");
}

void RewardParams::validate() const {
  require(r >= 0.0, ErrorKind::domain, "reinvestment rate r must be non-negative");
  require(r_max > 0.0, ErrorKind::domain, "r_max must be positive");
}

std::map<PlayerId, double> effective_powers(const PowerVector& pv, const PlayerMap& pm) {
  require(pv.size() == pm.size(), ErrorKind::structural,
          "player map has " + std::to_string(pm.size()) + " owners for " + std::to_string(pv.size()) + " nodes");
  std::map<PlayerId, double> ep;
  for (std::size_t i = 0; i < pv.size(); ++i) ep[pm[i]] += pv[i];
  return ep;
}

double percentile_power(std::span<const double> values, double delta) {
  require(!values.empty(), ErrorKind::domain, "percentile of an empty list");
  require(delta >= 0.0 && delta <= 100.0, ErrorKind::domain, "delta must lie in [0, 100]");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = sorted.size();
  // delta * n / 100 is formed before the ceiling so that e.g. 15% of 20 is
  // exactly rank 3; the small slack absorbs representation error of delta.
  auto rank = static_cast<std::size_t>(std::ceil(delta * static_cast<double>(n) / 100.0 - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, n);
  return sorted[rank - 1];
}

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::fails_count: return "fails-count";
    case Verdict::fails_ratio: return "fails-ratio";
  }
  return "unknown";
}

DecentralizationVerdict is_decentralized(const PowerVector& pv, const PlayerMap& pm,
                                         const DecentralizationSpec& spec) {
  spec.validate();
  const auto ep = effective_powers(pv, pm);
  std::vector<double> values;
  values.reserve(ep.size());
  for (const auto& [player, power] : ep) values.push_back(power);

  DecentralizationVerdict out;
  out.players = values.size();
  const double ep_max = *std::max_element(values.begin(), values.end());
  out.ratio = ep_max / percentile_power(values, spec.delta);
  if (out.players < static_cast<std::size_t>(spec.m)) {
    out.verdict = Verdict::fails_count;
  } else if (out.ratio > 1.0 + spec.epsilon) {
    out.verdict = Verdict::fails_ratio;
  }
  return out;
}

}  // namespace decent
