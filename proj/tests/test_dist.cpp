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
#include <map>
#include <vector>

#include <gtest/gtest.h>

#include "builders.hpp"
#include "sbo/sbo.hpp"

namespace sbo {
namespace {

std::vector<PmfPoint> Points(const DiscretePmf& pmf) {
  return {pmf.points().begin(), pmf.points().end()};
}

TEST(PmfTest, AlreadyValidUnchanged) {
  const DiscretePmf p = DiscretePmf::FromPoints({{1, 0.5}, {2, 0.5}});
  EXPECT_EQ(Points(p), (std::vector<PmfPoint>{{1, 0.5}, {2, 0.5}}));
}

TEST(PmfTest, Sorts) {
  const DiscretePmf p = DiscretePmf::FromPoints({{2, 0.5}, {1, 0.5}});
  EXPECT_EQ(Points(p), (std::vector<PmfPoint>{{1, 0.5}, {2, 0.5}}));
}

TEST(PmfTest, MergesDuplicates) {
  const DiscretePmf p = DiscretePmf::FromPoints({{1, 0.3}, {1, 0.7}});
  ASSERT_EQ(p.size(), 1U);
  EXPECT_EQ(p.points()[0].value, 1.0);
  EXPECT_NEAR(p.points()[0].prob, 1.0, 1e-15);
}

TEST(PmfTest, RenormalizesWithinToleranceOnly) {
  const DiscretePmf p = DiscretePmf::FromPoints({{1, 0.5}, {2, 0.5000005}});
  EXPECT_NEAR(p.points()[0].prob + p.points()[1].prob, 1.0, 1e-15);
  EXPECT_THROW(DiscretePmf::FromPoints({{1, 0.4}, {2, 0.4}}), ValidationError);
  EXPECT_THROW(DiscretePmf::FromPoints({{1, 0.5}, {2, 0.50001}}),
               ValidationError);
}

TEST(PmfTest, RejectsBadPoints) {
  EXPECT_THROW(DiscretePmf::FromPoints({}), ValidationError);
  EXPECT_THROW(DiscretePmf::FromPoints({{-1, 1.0}}), ValidationError);
  EXPECT_THROW(DiscretePmf::FromPoints({{1, -0.5}, {2, 1.5}}),
               ValidationError);
  EXPECT_THROW(DiscretePmf::FromPoints({{1, 0.0}, {2, 1.0}}), ValidationError);
}

TEST(PmfTest, TailProb) {
  const DiscretePmf p = DiscretePmf::FromPoints({{10, 0.5}, {30, 0.5}});
  EXPECT_EQ(p.TailProb(20), 0.5);
  EXPECT_EQ(p.TailProb(5), 1.0);
  EXPECT_EQ(p.TailProb(30), 0.0);
  EXPECT_EQ(p.TailProb(10), 0.5);  // strict
}

TEST(PmfTest, PartialExpectation) {
  const DiscretePmf p = DiscretePmf::FromPoints({{10, 0.5}, {30, 0.5}});
  EXPECT_EQ(p.PartialExpectation(20), 5.0);
  EXPECT_EQ(p.PartialExpectation(30), 20.0);
  EXPECT_EQ(p.PartialExpectation(1e9), p.Mean());
  EXPECT_EQ(p.PartialExpectation(9.99), 0.0);
  EXPECT_EQ(p.PartialExpectation(10), 5.0);  // inclusive
}

TEST(PmfTest, TailAndPrefixPropertiesOnRandomPmfs) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const DiscretePmf p = detail::RandomPmf(rng, 6, 0.0, 50.0);
    double prev = -1.0;
    for (const PmfPoint& pt : p.points()) {
      double at_most = 0.0;
      for (const PmfPoint& q : p.points()) {
        if (q.value <= pt.value) at_most += q.prob;
      }
      EXPECT_NEAR(p.TailProb(pt.value) + at_most, 1.0, 1e-12);
      const double pe = p.PartialExpectation(pt.value);
      EXPECT_GE(pe, prev);
      prev = pe;
    }
    double mean = 0.0;
    for (const PmfPoint& q : p.points()) mean += q.value * q.prob;
    EXPECT_NEAR(p.PartialExpectation(INFINITY), mean, 1e-12);
  }
}

TEST(PmfBucketTest, MergesIntoPowerBuckets) {
  const DiscretePmf p =
      DiscretePmf::FromPoints({{1, 0.3}, {1.05, 0.2}, {2, 0.5}});
  const DiscretePmf b = PmfBucket(p, 0.1);
  ASSERT_EQ(b.size(), 2U);
  EXPECT_EQ(b.points()[0].value, 1.0);
  EXPECT_NEAR(b.points()[0].prob, 0.5, 1e-15);
  // 1.1^7 is the largest power of 1.1 not above 2.
  EXPECT_NEAR(b.points()[1].value, std::pow(1.1, 7), 1e-12);
  EXPECT_NEAR(b.points()[1].value, 1.9487171, 1e-7);
  EXPECT_NEAR(b.points()[1].prob, 0.5, 1e-15);
}

TEST(PmfBucketTest, GridPointsAreFixed) {
  const double s = 3.0;
  const DiscretePmf p = DiscretePmf::FromPoints(
      {{s, 0.25}, {s * 1.2, 0.25}, {s * 1.2 * 1.2, 0.25},
       {s * std::pow(1.2, 5), 0.25}});
  EXPECT_EQ(Points(PmfBucket(p, 0.2)), Points(p));
}

TEST(PmfBucketTest, ZeroAndSingletonKept) {
  const DiscretePmf p = DiscretePmf::FromPoints({{0, 0.4}, {5, 0.6}});
  EXPECT_EQ(Points(PmfBucket(p, 0.3)), Points(p));
}

TEST(PmfBucketTest, UnderApproximatesWithinFactor) {
  Rng rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    const DiscretePmf p = detail::RandomPmf(rng, 30, 0.0, 1000.0);
    const double eps = 0.01 + 0.5 * UniformUnit(rng);
    const DiscretePmf b = PmfBucket(p, eps);
    double total = 0.0;
    for (const PmfPoint& q : b.points()) total += q.prob;
    EXPECT_NEAR(total, 1.0, 1e-12);
    // Map each source point to the bucket holding it: the largest bucket
    // value not above the source.
    for (const PmfPoint& src : p.points()) {
      const PmfPoint* hit = nullptr;
      for (const PmfPoint& q : b.points()) {
        if (q.value <= src.value) hit = &q;
      }
      ASSERT_NE(hit, nullptr);
      EXPECT_LE(hit->value, src.value);
      EXPECT_LE(src.value, (1.0 + eps) * hit->value * (1.0 + 1e-12));
    }
  }
}

TEST(SampleTest, FixedIsDeterministic) {
  const ClickModel m = FixedClicks{{3, 4}};
  EXPECT_EQ(Sample(m, 1).clicks, (std::vector<double>{3, 4}));
  EXPECT_EQ(Sample(m, 99).clicks, (std::vector<double>{3, 4}));
}

TEST(SampleTest, SameSeedSameRealization) {
  const Instance inst = GenRandom(ModelKind::kIndependent, 6, 4);
  EXPECT_EQ(Sample(inst.model(), 17).clicks, Sample(inst.model(), 17).clicks);
}

TEST(SampleTest, ProportionalSplit) {
  const ClickModel m =
      ProportionalClicks{{0.5, 0.5}, DiscretePmf::PointMass(10)};
  EXPECT_EQ(Sample(m, 3).clicks, (std::vector<double>{5, 5}));
}

TEST(SampleTest, FrequenciesConverge) {
  const DiscretePmf pmf =
      DiscretePmf::FromPoints({{0, 0.1}, {1, 0.2}, {4, 0.3}, {9, 0.4}});
  const ClickModel m = IndependentClicks{{pmf}};
  ModelSampler sampler(m);
  Rng rng(2024);
  constexpr int kDraws = 100'000;
  std::map<double, int> counts;
  for (int i = 0; i < kDraws; ++i) ++counts[sampler.Draw(rng).clicks[0]];
  for (const PmfPoint& p : pmf.points()) {
    const double freq = static_cast<double>(counts[p.value]) / kDraws;
    const double se = std::sqrt(p.prob * (1 - p.prob) / kDraws);
    EXPECT_LE(std::abs(freq - p.prob), 5 * se) << "value " << p.value;
  }
}

TEST(SupportSizeTest, Descriptors) {
  const ClickModel ind = IndependentClicks{
      {DiscretePmf::FromPoints({{1, 0.5}, {2, 0.5}}),
       DiscretePmf::FromPoints({{1, 0.2}, {2, 0.3}, {3, 0.5}})}};
  EXPECT_EQ(SupportSize(ind), 5U);
  EXPECT_EQ(JointSupportSize(std::get<IndependentClicks>(ind)), 6U);
  ScenarioClicks sc;
  for (int i = 0; i < 4; ++i) sc.scenarios.push_back({0.25, {1.0}});
  EXPECT_EQ(SupportSize(sc), 4U);
  EXPECT_EQ(SupportSize(FixedClicks{{1, 2, 3}}), 1U);
  const ClickModel prop = ProportionalClicks{
      {1.0}, DiscretePmf::FromPoints({{1, 0.5}, {3, 0.5}})};
  EXPECT_EQ(SupportSize(prop), 2U);
}

TEST(ValidateModelTest, ProportionalAndScenarioWeights) {
  EXPECT_THROW(ValidateModel(ProportionalClicks{{0.5, 0.4},
                                                DiscretePmf::PointMass(1)},
                             2),
               ValidationError);
  EXPECT_THROW(ValidateModel(ScenarioClicks{{{0.5, {1.0}}, {0.3, {1.0}}}}, 1),
               ValidationError);
  EXPECT_THROW(ValidateModel(ScenarioClicks{{{1.0, {1.0, 2.0}}}}, 1),
               DimensionError);
  EXPECT_THROW(ValidateModel(IndependentClicks{}, 1), DimensionError);
}

}  // namespace
}  // namespace sbo
