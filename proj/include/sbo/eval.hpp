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

// Expected objective E[value(b)] under each click model.
//
//   fixed, scenario      direct sum over the (few) outcomes
//   proportional         closed form through one budget threshold on C
//   independent          brute-force product enumeration (small supports),
//                        or the dynamic-programming approximation scheme
//   any                  Monte Carlo, used as a statistical cross-check
//
// Every evaluator handles keyword weights natively.

#ifndef SBO_EVAL_HPP_
#define SBO_EVAL_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sbo/core.hpp"
#include "sbo/dist.hpp"
#include "sbo/error.hpp"

namespace sbo {

inline constexpr std::size_t kDefaultExactJointCap = 1'000'000;
// Above this many explicit support points the PTAS buckets its inputs first.
inline constexpr std::size_t kDefaultExplicitSupportCap = 10'000;

inline EvalReport EvalFixed(const BidVector& bids, const Instance& instance) {
  const auto& model = instance.model_as<FixedClicks>();
  return EvalReport::Exact(Value(bids, model.clicks, instance), "fixed-exact");
}

inline EvalReport EvalScenario(const BidVector& bids,
                               const Instance& instance) {
  const auto& model = instance.model_as<ScenarioClicks>();
  double total = 0.0;
  for (const Scenario& s : model.scenarios) {
    if (s.prob == 0.0) continue;
    total += s.prob * Value(bids, s.clicks, instance);
  }
  return EvalReport::Exact(total, "scenario-exact");
}

// With S = sum b_i q_i cpc_i the day is over budget exactly when C > B / S,
// and cost/clicks does not depend on C. Hence
//   E[value] = Q * sum_{c <= c*} c p(c) + (B Q / S) * Pr[C > c*],
// Q = sum b_i w_i q_i, c* = B / S.
inline EvalReport EvalProportional(const BidVector& bids,
                                   const Instance& instance) {
  const auto& model = instance.model_as<ProportionalClicks>();
  detail::CheckSameLength(bids.size(), instance.size(), "bids");
  double clicks_rate = 0.0;
  double cost_rate = 0.0;
  for (std::size_t i = 0; i < bids.size(); ++i) {
    clicks_rate += bids[i] * instance.keyword(i).weight * model.q[i];
    cost_rate += bids[i] * model.q[i] * instance.cpc(i);
  }
  double value = 0.0;
  if (clicks_rate > 0.0) {
    if (cost_rate <= 0.0) {
      value = clicks_rate * model.total_clicks.Mean();
    } else {
      const double threshold = instance.budget() / cost_rate;
      value = clicks_rate * model.total_clicks.PartialExpectation(threshold) +
              instance.budget() * clicks_rate / cost_rate *
                  model.total_clicks.TailProb(threshold);
    }
  }
  return EvalReport::Exact(value, "proportional-exact");
}

// Enumerates the product distribution over keywords with a positive bid
// (the others cannot affect the objective). Throws SizeError when that joint
// support exceeds `cap`.
inline EvalReport EvalIndependentExact(const BidVector& bids,
                                       const Instance& instance,
                                       std::size_t cap = kDefaultExactJointCap) {
  const auto& model = instance.model_as<IndependentClicks>();
  detail::CheckSameLength(bids.size(), instance.size(), "bids");
  std::vector<std::size_t> active;
  std::size_t joint = 1;
  for (std::size_t i = 0; i < bids.size(); ++i) {
    if (bids[i] <= 0.0) continue;
    active.push_back(i);
    const std::size_t s = model.pmfs[i].size();
    if (joint > cap / s) {
      throw SizeError("joint support exceeds the exact-evaluation cap of " +
                      std::to_string(cap) + "; use the ptas method instead");
    }
    joint *= s;
  }
  if (active.empty()) return EvalReport::Exact(0.0, "independent-exact");

  const std::size_t m = active.size();
  // Odometer over support indices; prefix arrays make each step amortized
  // O(1): entry k holds the partial sums over active[0..k).
  std::vector<std::size_t> digit(m, 0);
  std::vector<double> clicks(m + 1, 0.0), cost(m + 1, 0.0), prob(m + 1, 1.0);
  auto refresh_from = [&](std::size_t k) {
    for (std::size_t j = k; j < m; ++j) {
      const std::size_t i = active[j];
      const PmfPoint& pt = model.pmfs[i].points()[digit[j]];
      const double bc = bids[i] * pt.value;
      clicks[j + 1] = clicks[j] + bc * instance.keyword(i).weight;
      cost[j + 1] = cost[j] + bc * instance.cpc(i);
      prob[j + 1] = prob[j] * pt.prob;
    }
  };
  refresh_from(0);
  double total = 0.0;
  while (true) {
    total += prob[m] *
             detail::ScaledValue(clicks[m], cost[m], instance.budget());
    std::size_t k = m;
    while (k > 0) {
      --k;
      if (++digit[k] < model.pmfs[active[k]].size()) break;
      digit[k] = 0;
      if (k == 0) return EvalReport::Exact(total, "independent-exact");
    }
    refresh_from(k);
  }
}

// Distribution of cost(b_{-i}) = sum_{j != i} b_j cpc_j clicks_j built row by
// row, one keyword per row. Costs are kept in units of `scale` (the smallest
// positive per-outcome cost) and every partial sum is rounded down onto
// {0} U {ratio^k : k >= 0}, ratio = 1 + eps/n. Only reachable levels are
// stored.
struct CostDistributionTable {
  struct Row {
    double zero_mass = 0.0;
    std::map<std::int64_t, double> levels;  // grid exponent -> probability

    double TotalMass() const {
      double total = zero_mass;
      for (const auto& [k, p] : levels) total += p;
      return total;
    }
  };

  double eps = 0.0;
  double ratio = 1.0;
  double scale = 1.0;
  std::size_t excluded = 0;
  std::vector<Row> rows;  // rows[0] is unit mass at 0

  double LevelCost(std::int64_t k) const {
    return scale * std::pow(ratio, static_cast<double>(k));
  }

  const Row& final_row() const { return rows.back(); }

  // (cost, probability) pairs of the final row, increasing in cost.
  std::vector<PmfPoint> FinalDistribution() const {
    std::vector<PmfPoint> out;
    const Row& row = final_row();
    if (row.zero_mass > 0.0) out.push_back({0.0, row.zero_mass});
    for (const auto& [k, p] : row.levels) out.push_back({LevelCost(k), p});
    return out;
  }
};

namespace detail {

// Largest k >= 0 with ratio^k <= x, for x >= 1. Strictly rounds down in
// floating point: the returned grid value never exceeds x.
inline std::int64_t FloorGridIndex(double x, double ratio) {
  auto k = static_cast<std::int64_t>(std::floor(std::log(x) / std::log(ratio)));
  if (k < 0) k = 0;
  while (k > 0 && std::pow(ratio, static_cast<double>(k)) > x) --k;
  while (std::pow(ratio, static_cast<double>(k + 1)) <= x) ++k;
  return k;
}

inline double MinPositiveCost(const BidVector& bids,
                              const IndependentClicks& model,
                              const Instance& instance, std::size_t skip) {
  double best = 0.0;
  for (std::size_t j = 0; j < bids.size(); ++j) {
    if (j == skip) continue;
    const double rate = bids[j] * instance.cpc(j);
    if (rate <= 0.0) continue;
    for (const PmfPoint& pt : model.pmfs[j].points()) {
      const double c = rate * pt.value;
      if (c > 0.0 && (best == 0.0 || c < best)) best = c;
    }
  }
  return best;
}

inline CostDistributionTable BuildCostTable(const BidVector& bids,
                                            const IndependentClicks& model,
                                            const Instance& instance,
                                            std::size_t exclude, double eps) {
  CostDistributionTable table;
  table.eps = eps;
  table.excluded = exclude;
  table.ratio = 1.0 + eps / static_cast<double>(instance.size());
  const double min_cost = MinPositiveCost(bids, model, instance, exclude);
  table.scale = min_cost > 0.0 ? min_cost : 1.0;

  CostDistributionTable::Row row;
  row.zero_mass = 1.0;
  table.rows.push_back(row);

  auto deposit = [&table](CostDistributionTable::Row& next, double units,
                          double mass) {
    if (units <= 0.0) {
      next.zero_mass += mass;
      return;
    }
    // Positive partial sums are at least one unit; clamp guards round-off.
    const std::int64_t k = FloorGridIndex(std::max(units, 1.0), table.ratio);
    next.levels[k] += mass;
  };

  for (std::size_t j = 0; j < bids.size(); ++j) {
    if (j == exclude) continue;
    const CostDistributionTable::Row& prev = table.rows.back();
    CostDistributionTable::Row next;
    const double rate = bids[j] * instance.cpc(j) / table.scale;
    for (const PmfPoint& pt : model.pmfs[j].points()) {
      const double add = rate * pt.value;
      if (prev.zero_mass > 0.0) deposit(next, add, prev.zero_mass * pt.prob);
      for (const auto& [k, p] : prev.levels) {
        const double base = std::pow(table.ratio, static_cast<double>(k));
        deposit(next, base + add, p * pt.prob);
      }
    }
    table.rows.push_back(std::move(next));
  }
  return table;
}

}  // namespace detail

// Approximate distribution of the cost of every keyword except `exclude`.
// Each mass point under-estimates its true cost by a factor of at most
// (1 + eps).
inline CostDistributionTable DpCostDistribution(const BidVector& bids,
                                                const Instance& instance,
                                                std::size_t exclude,
                                                double eps) {
  const auto& model = instance.model_as<IndependentClicks>();
  detail::CheckSameLength(bids.size(), instance.size(), "bids");
  if (!(eps > 0.0)) throw ParameterError("epsilon must be positive");
  if (exclude >= instance.size()) {
    throw ParameterError("excluded keyword index out of range");
  }
  return detail::BuildCostTable(bids, model, instance, exclude, eps);
}

// Decomposes E[value] = sum_i sum_c p_i(c) b_i w_i c s(i, c) with
// s(i, c) = E[1 / max(1, (cost(b_{-i}) + b_i c cpc_i) / B)] and estimates
// each s from the rounded-down cost table. Rounding down only raises 1/f, so
// the result V' satisfies exact <= V' <= (1 + eps) exact.
inline EvalReport EvalIndependentPtas(
    const BidVector& bids, const Instance& instance, double eps,
    std::size_t explicit_support_cap = kDefaultExplicitSupportCap) {
  const auto& original = instance.model_as<IndependentClicks>();
  detail::CheckSameLength(bids.size(), instance.size(), "bids");
  if (!(eps > 0.0 && eps <= 1.0)) {
    throw ParameterError("ptas epsilon must lie in (0, 1]");
  }

  double table_eps = eps;
  double scale = 1.0;
  IndependentClicks bucketed;
  const IndependentClicks* model = &original;
  if (SupportSize(original) > explicit_support_cap) {
    // Bucketing moves the objective by a factor of at most (1+eps') either
    // way, the table overestimates by at most (1+eps') and the result is
    // scaled up once by (1+eps'); three stages compose to (1+eps).
    table_eps = std::cbrt(1.0 + eps) - 1.0;
    scale = 1.0 + table_eps;
    for (const DiscretePmf& p : original.pmfs) {
      bucketed.pmfs.push_back(PmfBucket(p, table_eps));
    }
    model = &bucketed;
  }

  const double budget = instance.budget();
  double total = 0.0;
  for (std::size_t i = 0; i < bids.size(); ++i) {
    if (bids[i] <= 0.0) continue;
    bool any_clicks = false;
    for (const PmfPoint& pt : model->pmfs[i].points()) {
      any_clicks = any_clicks || pt.value > 0.0;
    }
    if (!any_clicks) continue;
    const CostDistributionTable table =
        detail::BuildCostTable(bids, *model, instance, i, table_eps);
    const std::vector<PmfPoint> others = table.FinalDistribution();
    for (const PmfPoint& pt : model->pmfs[i].points()) {
      if (pt.value <= 0.0) continue;
      const double own_cost = bids[i] * pt.value * instance.cpc(i);
      double s = 0.0;
      for (const PmfPoint& d : others) {
        s += d.prob / std::max(1.0, (d.value + own_cost) / budget);
      }
      total += pt.prob * bids[i] * instance.keyword(i).weight * pt.value * s;
    }
  }
  total *= scale;
  EvalReport report;
  report.value = total;
  report.method = "independent-ptas";
  report.epsilon = eps;
  report.lower = total / (1.0 + eps);
  report.upper = total;
  return report;
}

// Sample mean over `samples` draws from one seeded stream; bounds are the mean
// +/- 3 standard errors.
inline EvalReport EvalMonteCarlo(const BidVector& bids,
                                 const Instance& instance, std::size_t samples,
                                 std::uint64_t seed) {
  if (samples == 0) throw ParameterError("samples must be at least 1");
  detail::CheckSameLength(bids.size(), instance.size(), "bids");
  Rng rng(seed);
  const ModelSampler sampler(instance.model());
  // Accumulate deviations from the first draw so constant outcomes give an
  // exact mean and zero variance.
  const double first = Value(bids, sampler.Draw(rng), instance);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t k = 1; k < samples; ++k) {
    const double dev = Value(bids, sampler.Draw(rng), instance) - first;
    sum += dev;
    sum_sq += dev * dev;
  }
  const double n = static_cast<double>(samples);
  const double mean = first + sum / n;
  double std_error = 0.0;
  if (samples > 1) {
    const double var = std::max(0.0, (sum_sq - sum * sum / n) / (n - 1.0));
    std_error = std::sqrt(var / n);
  }
  EvalReport report;
  report.value = mean;
  report.method = "monte-carlo";
  report.lower = mean - 3.0 * std_error;
  report.upper = mean + 3.0 * std_error;
  report.samples = samples;
  report.seed = seed;
  report.std_error = std_error;
  return report;
}

// Exact evaluation for whichever model the instance carries.
inline EvalReport EvalExact(const BidVector& bids, const Instance& instance,
                            std::size_t exact_cap = kDefaultExactJointCap) {
  switch (instance.kind()) {
    case ModelKind::kFixed:
      return EvalFixed(bids, instance);
    case ModelKind::kProportional:
      return EvalProportional(bids, instance);
    case ModelKind::kIndependent:
      return EvalIndependentExact(bids, instance, exact_cap);
    case ModelKind::kScenario:
      return EvalScenario(bids, instance);
  }
  throw ModelMismatchError("unknown model");
}

enum class EvalMethod { kAuto, kExact, kPtas, kMonteCarlo };

struct EvalOptions {
  EvalMethod method = EvalMethod::kAuto;
  double epsilon = 0.05;
  std::size_t samples = 100'000;
  std::uint64_t seed = 0;
  std::size_t exact_cap = kDefaultExactJointCap;
};

// auto: exact everywhere except independent instances whose joint support
// exceeds the exact cap, which fall back to the PTAS.
inline EvalReport Evaluate(const BidVector& bids, const Instance& instance,
                           const EvalOptions& options) {
  switch (options.method) {
    case EvalMethod::kExact:
      return EvalExact(bids, instance, options.exact_cap);
    case EvalMethod::kPtas:
      if (instance.kind() != ModelKind::kIndependent) {
        throw ModelMismatchError(
            std::string("method ptas applies to the independent model only; "
                        "valid methods for ") +
            ModelName(instance.kind()) + " are exact, mc, auto");
      }
      return EvalIndependentPtas(bids, instance, options.epsilon);
    case EvalMethod::kMonteCarlo:
      return EvalMonteCarlo(bids, instance, options.samples, options.seed);
    case EvalMethod::kAuto:
      if (instance.kind() == ModelKind::kIndependent) {
        try {
          return EvalIndependentExact(bids, instance, options.exact_cap);
        } catch (const SizeError&) {
          return EvalIndependentPtas(bids, instance, options.epsilon);
        }
      }
      return EvalExact(bids, instance, options.exact_cap);
  }
  throw ParameterError("unknown evaluation method");
}

}  // namespace sbo

#endif  // SBO_EVAL_HPP_
