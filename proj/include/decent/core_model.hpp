#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace decent {

// Resource power committed by each node. Entries are strictly positive and
// the vector is never empty.
class PowerVector {
 public:
  explicit PowerVector(std::vector<double> powers);
  PowerVector(std::initializer_list<double> powers) : PowerVector(std::vector<double>(powers)) {}

  std::size_t size() const noexcept { return powers_.size(); }
  double operator[](std::size_t i) const { return powers_[i]; }
  std::span<const double> values() const noexcept { return powers_; }
  double total() const noexcept;
  double max() const noexcept;

  bool operator==(const PowerVector&) const = default;

 private:
  std::vector<double> powers_;
};

using PlayerId = std::string;

// Owner of each node, parallel to a PowerVector.
class PlayerMap {
 public:
  explicit PlayerMap(std::vector<PlayerId> owners);
  PlayerMap(std::initializer_list<PlayerId> owners) : PlayerMap(std::vector<PlayerId>(owners)) {}

  // One player per node, named "p0", "p1", ...
  static PlayerMap one_per_node(std::size_t nodes);

  std::size_t size() const noexcept { return owners_.size(); }
  const PlayerId& operator[](std::size_t i) const { return owners_[i]; }
  std::span<const PlayerId> owners() const noexcept { return owners_; }
  std::size_t distinct_players() const;

 private:
  std::vector<PlayerId> owners_;
};

enum class PercentileRule { nearest_rank };

struct DecentralizationSpec {
  int m = 1;
  double epsilon = 0.0;
  double delta = 0.0;
  PercentileRule percentile_rule = PercentileRule::nearest_rank;

  void validate() const;
};

struct RewardParams {
  double r = 1.0;      // resource units gained per unit of net profit
  double r_max = 1.0;  // cap on the net reward of one time unit

  void validate() const;
};

// Sum of node powers per player. Throws structural error on length mismatch.
std::map<PlayerId, double> effective_powers(const PowerVector& pv, const PlayerMap& pm);

// Nearest-rank percentile: delta = 0 gives the minimum, delta = 100 the
// maximum, otherwise the ceil(delta/100 * n)-th smallest value.
double percentile_power(std::span<const double> values, double delta);

enum class Verdict { holds, fails_count, fails_ratio };

const char* to_string(Verdict v) noexcept;

struct DecentralizationVerdict {
  Verdict verdict = Verdict::holds;
  std::size_t players = 0;
  double ratio = 1.0;  // EP_max / EP_delta, reported for every verdict

  bool holds() const noexcept { return verdict == Verdict::holds; }
};

// (m, epsilon, delta)-decentralization of the current state. When both parts
// fail the player-count failure is reported.
DecentralizationVerdict is_decentralized(const PowerVector& pv, const PlayerMap& pm,
                                         const DecentralizationSpec& spec);

}  // namespace decent
