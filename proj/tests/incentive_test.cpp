#include "decent/incentive.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "decent/error.hpp"

namespace decent {
namespace {

double value_of(const IncentiveModel& m, std::size_t i, const PowerVector& pv) {
  const auto u = utility(m, i, pv);
  EXPECT_TRUE(u.has_value());
  return u.value_or(NAN);
}

TEST(Utility, PowProportional) {
  EXPECT_DOUBLE_EQ(value_of(PowModel{12.5, 0, 0}, 0, {1, 3}), 3.125);
}

TEST(Utility, PowNegativeWithFixedCost) {
  EXPECT_DOUBLE_EQ(value_of(PowModel{12.5, 0, 4}, 0, {1, 9}), -2.75);
  EXPECT_DOUBLE_EQ(value_of(PowModel{12.5, 0, 4}, 1, {1, 9}), 7.25);
}

TEST(Utility, PowElectricityCost) {
  // 10 * 2/4 - 0.5 * 2 - 1
  EXPECT_DOUBLE_EQ(value_of(PowModel{10, 0.5, 1}, 0, {2, 2}), 3.0);
}

TEST(Utility, GammaSquareRoot) {
  EXPECT_DOUBLE_EQ(value_of(GammaModel{3, 0.5}, 0, {4, 1}), 2.0);
  EXPECT_DOUBLE_EQ(value_of(GammaModel{3, 0.5}, 1, {4, 1}), 1.0);
}

TEST(Utility, GammaInverseTotalSchedule) {
  EXPECT_DOUBLE_EQ(value_of(GammaModel{3, 0.5, RewardSchedule::inverse_total}, 0, {4, 1}), 2.0 / 5.0);
}

TEST(Utility, DposTopN) {
  const IncentiveModel m = DposModel{5, 1, 2};
  const PowerVector pv{3, 2, 1};
  EXPECT_DOUBLE_EQ(value_of(m, 0, pv), 4.0);
  EXPECT_DOUBLE_EQ(value_of(m, 1, pv), 4.0);
  EXPECT_DOUBLE_EQ(value_of(m, 2, pv), -1.0);
}

TEST(Utility, DposTiesGoToLowerIndex) {
  const auto u = utilities(DposModel{5, 1, 1}, {2, 2, 2});
  EXPECT_DOUBLE_EQ(*u[0], 4.0);
  EXPECT_DOUBLE_EQ(*u[1], -1.0);
  EXPECT_DOUBLE_EQ(*u[2], -1.0);
}

TEST(Utility, DposDependsOnlyOnRank) {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> power(0.1, 100.0);
  const IncentiveModel m = DposModel{5, 1, 3};
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> p(6);
    for (auto& x : p) x = power(gen);
    // Monotone transform keeps the ranking and must keep every utility.
    std::vector<double> q = p;
    for (auto& x : q) x = std::pow(x, 3.0) + 7.0;
    const auto a = utilities(m, PowerVector(p));
    const auto b = utilities(m, PowerVector(q));
    for (std::size_t i = 0; i < p.size(); ++i) EXPECT_EQ(*a[i], *b[i]);
  }
}

TEST(Utility, PosCannotRunBelowMinimumStake) {
  const IncentiveModel m = PosModel{10, 1, 2};
  const PowerVector pv{1, 3};
  EXPECT_FALSE(utility(m, 0, pv).has_value());
  EXPECT_DOUBLE_EQ(value_of(m, 1, pv), 10.0 * 3 / 4 - 1);
}

TEST(Utility, LinearForms) {
  EXPECT_DOUBLE_EQ(value_of(LinearModel{2, RewardSchedule::constant}, 1, {1, 3}), 6.0);
  EXPECT_DOUBLE_EQ(value_of(LinearModel{2, RewardSchedule::inverse_total}, 1, {1, 3}), 1.5);
}

TEST(Utility, IndexOutOfRange) {
  try {
    utility(PowModel{1, 0, 0}, 2, {1, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::structural);
  }
}

TEST(Utility, GammaRatioTrichotomy) {
  // U_i / alpha_i against alpha_i for fixed others: decreasing when gamma < 1,
  // constant at gamma = 1, increasing when gamma > 1.
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> power(0.1, 50.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> p(4);
    for (auto& x : p) x = power(gen);
    if (p[0] == p[1]) continue;
    if (p[0] < p[1]) std::swap(p[0], p[1]);  // p[0] richer
    const PowerVector pv(p);
    for (double gamma : {0.25, 0.5, 0.9, 1.0, 1.1, 1.5, 2.0}) {
      const auto u = utilities(GammaModel{3, gamma}, pv);
      const double rich = *u[0] / p[0];
      const double poor = *u[1] / p[1];
      if (gamma < 1.0) {
        EXPECT_LT(rich, poor);
      } else if (gamma > 1.0) {
        EXPECT_GT(rich, poor);
      } else {
        EXPECT_NEAR(rich, poor, 1e-12 * poor);
      }
    }
  }
}

TEST(Utility, LinearMergeSplitInvariance) {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> power(0.1, 20.0);
  const IncentiveModel m = LinearModel{3.0, RewardSchedule::inverse_total};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> context(1 + gen() % 4);
    for (auto& x : context) x = power(gen);
    const double whole = power(gen);
    std::vector<double> parts(2 + gen() % 4);
    double remaining = whole;
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
      parts[i] = remaining * std::uniform_real_distribution<double>(0.05, 0.6)(gen);
      remaining -= parts[i];
    }
    parts.back() = remaining;

    std::vector<double> merged{whole};
    merged.insert(merged.end(), context.begin(), context.end());
    std::vector<double> split = parts;
    split.insert(split.end(), context.begin(), context.end());
    const double u_whole = *utility(m, 0, PowerVector(merged));
    const auto u_split = utilities(m, PowerVector(split));
    double sum = 0.0;
    for (std::size_t i = 0; i < parts.size(); ++i) sum += *u_split[i];
    EXPECT_NEAR(sum, u_whole, 1e-9 * std::abs(u_whole));
  }
}

TEST(SampleReward, GammaWinnerFrequencies) {
  const IncentiveModel m = GammaModel{3, 0.5};
  const PowerVector pv{4, 1};
  Rng rng(123);
  const int n = 300000;
  int wins0 = 0;
  for (int i = 0; i < n; ++i) {
    const auto draw = sample_reward(m, pv, rng);
    if (draw.winner == 0) {
      ++wins0;
      EXPECT_DOUBLE_EQ(draw.net_rewards[0], 3.0);
      EXPECT_DOUBLE_EQ(draw.net_rewards[1], 0.0);
    }
  }
  const double p = 2.0 / 3.0;
  EXPECT_NEAR(static_cast<double>(wins0) / n, p, 4 * std::sqrt(p * (1 - p) / n));
}

TEST(SampleReward, SingleNodeAlwaysWins) {
  Rng rng(9);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_EQ(sample_reward(PowModel{12.5, 0, 0}, {7.0}, rng).winner, 0u);
    EXPECT_EQ(sample_reward(GammaModel{1, 0.5}, {7.0}, rng).winner, 0u);
  }
}

TEST(SampleReward, PowFairCoinWithinThreeSigma) {
  Rng rng(2024);
  const int n = 1000000;
  int wins0 = 0;
  for (int i = 0; i < n; ++i) wins0 += sample_reward(PowModel{12.5, 0, 0}, {1, 1}, rng).winner == 0;
  EXPECT_NEAR(static_cast<double>(wins0) / n, 0.5, 3 * std::sqrt(0.25 / n));
}

TEST(SampleReward, DeterministicAndLinearRejected) {
  Rng rng(1);
  for (const IncentiveModel& m : {IncentiveModel{DposModel{5, 1, 2}}, IncentiveModel{LinearModel{}}}) {
    try {
      sample_reward(m, {1, 2}, rng);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::unsupported);
    }
  }
}

TEST(SampleReward, PosBelowStakeRejected) {
  Rng rng(1);
  EXPECT_THROW(sample_reward(PosModel{10, 1, 2}, {1, 3}, rng), Error);
}

// Law of large numbers: the mean net reward converges to utility().
TEST(SampleReward, MeanConvergesToUtility) {
  const PowerVector pv{0.5, 2.0, 4.0, 1.5};
  const std::vector<IncentiveModel> models{PowModel{12.5, 0.3, 0.7}, PosModel{6, 0.5, 0.4}, GammaModel{3, 0.5},
                                           GammaModel{2, 1.5}};
  for (const auto& m : models) {
    Rng rng(77);
    const int n = 1000000;
    std::vector<double> sum(pv.size(), 0.0);
    for (int i = 0; i < n; ++i) {
      const auto draw = sample_reward(m, pv, rng);
      for (std::size_t j = 0; j < pv.size(); ++j) sum[j] += draw.net_rewards[j];
    }
    const auto u = utilities(m, pv);
    const auto w = lottery_weights(m, pv);
    double wsum = 0.0;
    for (double x : w) wsum += x;
    const double reward = std::visit(
        [](const auto& v) -> double {
          if constexpr (requires { v.block_reward; }) return v.block_reward;
          return 0.0;
        },
        m);
    for (std::size_t j = 0; j < pv.size(); ++j) {
      const double p = w[j] / wsum;
      const double sigma = reward * std::sqrt(p * (1 - p) / n);
      EXPECT_NEAR(sum[j] / n, *u[j], 4 * sigma) << model_name(m) << " node " << j;
    }
  }
}

TEST(SybilCost, SingleNodeIsFree) {
  const std::vector<double> one{4.0}, ctx{1.0};
  EXPECT_EQ(sybil_cost(ThresholdCoverCost{0.5}, GammaModel{3, 0.5}, one, ctx), 0.0);
  EXPECT_EQ(sybil_cost(ZeroSybilCost{}, PowModel{1, 0, 1}, one, ctx), 0.0);
}

TEST(SybilCost, ThresholdCoverMatchesSplitGain) {
  const std::vector<double> nodes{1, 1, 1, 1}, ctx{1.0};
  // (1,1,1,1,1) gives the player 4 * 3/5 = 2.4; (4,1) gives 3 * 2/3 = 2.0.
  EXPECT_NEAR(split_gain(GammaModel{3, 0.5}, nodes, ctx), 0.4, 1e-12);
  EXPECT_NEAR(sybil_cost(ThresholdCoverCost{0}, GammaModel{3, 0.5}, nodes, ctx), 0.4, 1e-12);
  EXPECT_NEAR(sybil_cost(ThresholdCoverCost{0.25}, GammaModel{3, 0.5}, nodes, ctx), 0.65, 1e-12);
  EXPECT_EQ(sybil_cost(ZeroSybilCost{}, GammaModel{3, 0.5}, nodes, ctx), 0.0);
}

TEST(SybilCost, NeverNegative) {
  // Splitting under a fixed node cost loses money; the cover charges margin only.
  const std::vector<double> nodes{1, 1}, ctx{2.0};
  EXPECT_LT(split_gain(PowModel{10, 0, 1}, nodes, ctx), 0.0);
  EXPECT_DOUBLE_EQ(sybil_cost(ThresholdCoverCost{0.1}, PowModel{10, 0, 1}, nodes, ctx), 0.1);
}

}  // namespace
}  // namespace decent
