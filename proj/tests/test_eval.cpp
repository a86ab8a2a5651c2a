// Copyright 2026 The SBO Toolkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "builders.hpp"
#include "oracles.hpp"
#include "sbo/sbo.hpp"

namespace sbo {
namespace {

using testing::Bids;

Instance TwoKeywordFixed(double budget) {
  return testing::Fixed({1, 2}, {10, 10}, budget);
}

Instance TwoPointProportional(double budget) {
  return testing::Proportional({1, 1}, {0.5, 0.5}, {{10, 0.5}, {30, 0.5}},
                               budget);
}

TEST(EvalFixedTest, Examples) {
  EXPECT_EQ(EvalFixed(Bids({1, 1}), TwoKeywordFixed(15)).value, 10.0);
  EXPECT_EQ(EvalFixed(Bids({1, 0.25}), TwoKeywordFixed(15)).value, 12.5);
  EXPECT_EQ(EvalFixed(Bids({0, 0}), TwoKeywordFixed(15)).value, 0.0);
  const EvalReport r = EvalFixed(Bids({1, 1}), TwoKeywordFixed(15));
  EXPECT_EQ(r.lower, r.value);
  EXPECT_EQ(r.upper, r.value);
  EXPECT_EQ(r.epsilon, 0.0);
}

TEST(EvalFixedTest, ModelMismatch) {
  EXPECT_THROW(EvalFixed(Bids({1, 1}), TwoPointProportional(20)),
               ModelMismatchError);
  EXPECT_THROW(EvalScenario(Bids({1, 1}), TwoKeywordFixed(1)),
               ModelMismatchError);
  EXPECT_THROW(EvalProportional(Bids({1, 1}), TwoKeywordFixed(1)),
               ModelMismatchError);
  EXPECT_THROW(EvalIndependentExact(Bids({1, 1}), TwoKeywordFixed(1)),
               ModelMismatchError);
}

TEST(EvalScenarioTest, SingleScenarioMatchesFixed) {
  const Instance s = testing::Scenarios({1, 2}, {{1.0, {10, 10}}}, 15);
  EXPECT_EQ(EvalScenario(Bids({1, 0.5}), s).value,
            EvalFixed(Bids({1, 0.5}), TwoKeywordFixed(15)).value);
}

TEST(EvalScenarioTest, GapInstanceOddKeywords) {
  const Instance gap = GenGapExample(2, 10, 1);
  const double alpha = 1.0 / (10.0 + 1000.0);
  const double v = EvalScenario(Bids({1, 0, 1, 0}), gap).value;
  EXPECT_NEAR(v, 2 * alpha, 1e-15);
  EXPECT_NEAR(v, 1.9802e-3, 1e-7);
  EXPECT_NEAR(v, oracle::Expectation(gap, {1, 0, 1, 0}), 1e-15);
}

TEST(EvalScenarioTest, DuplicateScenariosMerge) {
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const BidVector b = testing::RandomBids(rng, 3);
    const Instance split = testing::Scenarios(
        {1, 2, 3}, {{0.3, {4, 5, 6}}, {0.7, {4, 5, 6}}}, 10);
    const Instance merged =
        testing::Scenarios({1, 2, 3}, {{1.0, {4, 5, 6}}}, 10);
    EXPECT_TRUE(oracle::RelClose(EvalScenario(b, split).value,
                                 EvalScenario(b, merged).value, 1e-12));
  }
}

TEST(EvalProportionalTest, Examples) {
  EXPECT_NEAR(EvalProportional(Bids({1, 1}), TwoPointProportional(20)).value,
              15.0, 1e-12);
  EXPECT_NEAR(EvalProportional(Bids({1, 0}), TwoPointProportional(20)).value,
              10.0, 1e-12);
  // Budget never binds: E[C] * sum b q.
  EXPECT_NEAR(
      EvalProportional(Bids({1, 0.5}), TwoPointProportional(1000)).value,
      20.0 * 0.75, 1e-12);
  // Oracle agreement on the worked examples.
  EXPECT_NEAR(oracle::Expectation(TwoPointProportional(20), {1, 1}), 15.0,
              1e-12);
  EXPECT_NEAR(oracle::Expectation(TwoPointProportional(20), {1, 0}), 10.0,
              1e-12);
}

TEST(EvalProportionalTest, ZeroCostRateNeverBudgetLimited) {
  const Instance inst = testing::Proportional({0, 5}, {0.4, 0.6},
                                              {{10, 0.5}, {100, 0.5}}, 1);
  EXPECT_NEAR(EvalProportional(Bids({1, 0}), inst).value, 0.4 * 55, 1e-12);
}

TEST(EvalProportionalTest, MatchesPerOutcomeExpectation) {
  Rng rng(8);
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const Instance inst = GenRandom(ModelKind::kProportional, 1 + seed % 6,
                                    seed);
    const BidVector b = testing::RandomBids(rng, inst.size());
    EXPECT_TRUE(oracle::RelClose(EvalProportional(b, inst).value,
                                 oracle::Expectation(inst, testing::AsVector(b)),
                                 1e-12));
  }
}

TEST(EvalIndependentExactTest, NonprefixValues) {
  const Instance inst = GenNonprefixExample();
  EXPECT_NEAR(EvalIndependentExact(Bids({1, 1, 1}), inst).value, 1.75, 1e-12);
  EXPECT_NEAR(EvalIndependentExact(Bids({1, 0, 1}), inst).value, 2.0, 1e-12);
}

TEST(EvalIndependentExactTest, DegeneratePmfsMatchFixed) {
  const Instance ind =
      testing::Independent({1, 2}, {{{10, 1.0}}, {{10, 1.0}}}, 15);
  for (double b : {0.0, 0.25, 0.5, 1.0}) {
    EXPECT_EQ(EvalIndependentExact(Bids({1, b}), ind).value,
              EvalFixed(Bids({1, b}), TwoKeywordFixed(15)).value);
  }
}

TEST(EvalIndependentExactTest, CapRaisesSizeError) {
  std::vector<std::vector<PmfPoint>> pmfs(
      4, std::vector<PmfPoint>{{1, 0.5}, {2, 0.5}});
  const Instance inst = testing::Independent({1, 1, 1, 1}, pmfs, 3);
  EXPECT_THROW(EvalIndependentExact(BidVector::Ones(4), inst, 15), SizeError);
  EXPECT_NO_THROW(EvalIndependentExact(BidVector::Ones(4), inst, 16));
  // Keywords without a bid do not count toward the joint support.
  EXPECT_NO_THROW(EvalIndependentExact(Bids({1, 1, 1, 0}), inst, 8));
}

TEST(EvalIndependentExactTest, MatchesScenarioExpansion) {
  Rng rng(12);
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const Instance ind = GenRandom(ModelKind::kIndependent, 1 + seed % 5, seed);
    const Instance sc = oracle::IndependentAsScenarios(ind);
    const BidVector b = testing::RandomBids(rng, ind.size());
    EXPECT_TRUE(oracle::RelClose(EvalIndependentExact(b, ind).value,
                                 EvalScenario(b, sc).value, 1e-12));
    EXPECT_TRUE(oracle::RelClose(EvalIndependentExact(b, ind).value,
                                 oracle::Expectation(ind, testing::AsVector(b)),
                                 1e-12));
  }
}

TEST(DpCostDistributionTest, NonprefixExcludeLast) {
  const CostDistributionTable t =
      DpCostDistribution(Bids({1, 1, 1}), GenNonprefixExample(), 2, 0.1);
  const std::vector<PmfPoint> d = t.FinalDistribution();
  ASSERT_EQ(d.size(), 2U);
  EXPECT_EQ(d[0].value, 0.0);
  EXPECT_NEAR(d[0].prob, 0.5, 1e-15);
  EXPECT_NEAR(d[1].value, 1.0, 1e-15);
  EXPECT_NEAR(d[1].prob, 0.5, 1e-15);
  EXPECT_EQ(t.rows.size(), 3U);
  EXPECT_EQ(t.rows[0].zero_mass, 1.0);
}

TEST(DpCostDistributionTest, ExcludingOnlyBidKeyword) {
  const CostDistributionTable t =
      DpCostDistribution(Bids({0, 1, 0}), GenNonprefixExample(), 1, 0.1);
  const std::vector<PmfPoint> d = t.FinalDistribution();
  ASSERT_EQ(d.size(), 1U);
  EXPECT_EQ(d[0].value, 0.0);
  EXPECT_EQ(d[0].prob, 1.0);
}

TEST(DpCostDistributionTest, SingleKeyword) {
  const Instance inst = testing::Independent({2}, {{{1, 0.5}, {3, 0.5}}}, 1);
  const std::vector<PmfPoint> d =
      DpCostDistribution(Bids({1}), inst, 0, 0.1).FinalDistribution();
  ASSERT_EQ(d.size(), 1U);
  EXPECT_EQ(d[0].value, 0.0);
  EXPECT_EQ(d[0].prob, 1.0);
}

TEST(DpCostDistributionTest, RoundedCostsBracketTrueCosts) {
  Rng rng(21);
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const Instance inst = GenRandom(ModelKind::kIndependent, 2 + seed % 6, seed);
    const BidVector b = testing::RandomBids(rng, inst.size());
    const double eps = 0.05 + 0.5 * UniformUnit(rng);
    const std::size_t exclude = seed % inst.size();
    const CostDistributionTable t = DpCostDistribution(b, inst, exclude, eps);
    for (const auto& row : t.rows) EXPECT_NEAR(row.TotalMass(), 1.0, 1e-9);

    // True cost distribution of the other keywords.
    const oracle::Flat f = oracle::Flatten(inst);
    std::vector<double> true_costs;
    for (const oracle::Outcome& o : f.outcomes) {
      double cost = 0.0;
      for (std::size_t j = 0; j < inst.size(); ++j) {
        if (j != exclude) cost += b[j] * f.cpc[j] * o.clicks[j];
      }
      true_costs.push_back(cost);
    }
    // Each mass point must be a rounding of some true cost.
    for (const PmfPoint& d : t.FinalDistribution()) {
      bool explained = false;
      for (double c : true_costs) {
        if (d.value <= c * (1 + 1e-12) &&
            c <= (1 + eps) * d.value * (1 + 1e-12)) {
          explained = true;
        }
      }
      EXPECT_TRUE(explained) << "mass point " << d.value;
    }
  }
}

TEST(EvalIndependentPtasTest, NonprefixSandwich) {
  const EvalReport r =
      EvalIndependentPtas(Bids({1, 1, 1}), GenNonprefixExample(), 0.1);
  EXPECT_GE(r.value, 1.75 - 1e-12);
  EXPECT_LE(r.value, 1.925 + 1e-12);
  EXPECT_EQ(r.upper, r.value);
  EXPECT_NEAR(r.lower, r.value / 1.1, 1e-15);
}

TEST(EvalIndependentPtasTest, DegenerateMatchesFixed) {
  const Instance ind =
      testing::Independent({1, 2}, {{{10, 1.0}}, {{10, 1.0}}}, 15);
  for (double eps : {0.01, 0.1, 1.0}) {
    EXPECT_NEAR(EvalIndependentPtas(Bids({1, 1}), ind, eps).value, 10.0,
                1e-12);
    EXPECT_NEAR(EvalIndependentPtas(Bids({1, 0.25}), ind, eps).value, 12.5,
                1e-12);
  }
}

TEST(EvalIndependentPtasTest, RejectsEpsilon) {
  EXPECT_THROW(EvalIndependentPtas(Bids({1, 1, 1}), GenNonprefixExample(), 0),
               ParameterError);
  EXPECT_THROW(
      EvalIndependentPtas(Bids({1, 1, 1}), GenNonprefixExample(), -0.1),
      ParameterError);
}

TEST(EvalIndependentPtasTest, SandwichOnRandomInstances) {
  Rng rng(77);
  int violations = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const Instance inst = GenRandom(ModelKind::kIndependent, 1 + seed % 8, seed);
    const BidVector b = testing::RandomBids(rng, inst.size());
    const double exact = oracle::Expectation(inst, testing::AsVector(b));
    const double ptas = EvalIndependentPtas(b, inst, 0.1).value;
    if (!(exact <= ptas * (1 + 1e-12) && ptas <= 1.1 * exact * (1 + 1e-12))) {
      ++violations;
    }
  }
  EXPECT_EQ(violations, 0);
}

TEST(EvalIndependentPtasTest, BucketedPathKeepsSandwich) {
  // Force bucketing with a zero explicit-support cap.
  Rng rng(31);
  RandomConfig config;
  config.max_support = 6;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const Instance inst =
        GenRandom(ModelKind::kIndependent, 1 + seed % 6, seed, config);
    const BidVector b = testing::RandomBids(rng, inst.size());
    const double exact = oracle::Expectation(inst, testing::AsVector(b));
    const double ptas = EvalIndependentPtas(b, inst, 0.2, 0).value;
    EXPECT_LE(exact, ptas * (1 + 1e-12));
    EXPECT_LE(ptas, 1.2 * exact * (1 + 1e-12));
  }
}

TEST(EvalMonteCarloTest, FixedModelExact) {
  const EvalReport r = EvalMonteCarlo(Bids({1, 0.25}), TwoKeywordFixed(15),
                                      1000, 5);
  EXPECT_EQ(r.value, 12.5);
  EXPECT_EQ(r.std_error, 0.0);
  EXPECT_EQ(r.lower, r.upper);
}

TEST(EvalMonteCarloTest, NonprefixWithinThreeStandardErrors) {
  const EvalReport r =
      EvalMonteCarlo(Bids({1, 1, 1}), GenNonprefixExample(), 100'000, 1);
  EXPECT_LE(std::abs(r.value - 1.75), 3 * r.std_error);
  EXPECT_GT(r.std_error, 0.0);
}

TEST(EvalMonteCarloTest, GapInstanceWithinThreeStandardErrors) {
  const Instance gap = GenGapExample(3, 5, 2);
  const BidVector b = Bids({1, 0, 1, 0, 1, 0});
  const EvalReport r = EvalMonteCarlo(b, gap, 100'000, 3);
  EXPECT_LE(std::abs(r.value - EvalScenario(b, gap).value), 3 * r.std_error);
}

TEST(EvalMonteCarloTest, ConvergesOnSeededTrials) {
  Rng rng(77);
  int within = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const Instance inst =
        GenRandom(testing::kAllKinds[seed % 4], 1 + seed % 5, seed);
    const BidVector b = testing::RandomBids(rng, inst.size());
    const double exact = oracle::Expectation(inst, testing::AsVector(b));
    const EvalReport r = EvalMonteCarlo(b, inst, 20'000, seed);
    if (std::abs(r.value - exact) <=
        3 * r.std_error + 1e-12 * std::max(1.0, exact)) {
      ++within;
    }
  }
  EXPECT_GE(within, 99);
}

TEST(EvalMonteCarloTest, DeterministicInSeedAndRejectsZeroSamples) {
  const Instance inst = GenNonprefixExample();
  EXPECT_EQ(EvalMonteCarlo(Bids({1, 1, 1}), inst, 500, 9).value,
            EvalMonteCarlo(Bids({1, 1, 1}), inst, 500, 9).value);
  EXPECT_THROW(EvalMonteCarlo(Bids({1, 1, 1}), inst, 0, 9), ParameterError);
}

TEST(EvaluateTest, DispatchRules) {
  const Instance fixed = TwoKeywordFixed(15);
  EvalOptions ptas;
  ptas.method = EvalMethod::kPtas;
  EXPECT_THROW(Evaluate(Bids({1, 1}), fixed, ptas), ModelMismatchError);
  EXPECT_EQ(Evaluate(Bids({1, 1}), fixed, {}).value, 10.0);

  // auto falls back to the PTAS above the exact cap.
  std::vector<std::vector<PmfPoint>> pmfs(
      4, std::vector<PmfPoint>{{1, 0.5}, {2, 0.5}});
  const Instance ind = testing::Independent({1, 1, 1, 1}, pmfs, 3);
  EvalOptions small_cap;
  small_cap.exact_cap = 4;
  EXPECT_EQ(Evaluate(BidVector::Ones(4), ind, small_cap).method,
            "independent-ptas");
  small_cap.method = EvalMethod::kExact;
  EXPECT_THROW(Evaluate(BidVector::Ones(4), ind, small_cap), SizeError);
}

}  // namespace
}  // namespace sbo
