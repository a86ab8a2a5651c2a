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

// Bid optimizers.
//
// Most of them search over prefix solutions: with keywords sorted by cpc, bid
// 1 on everything before some keyword, a fraction on it, 0 after it. Prefixes
// are optimal for the fixed and proportional models, within a factor 2 of the
// integer optimum for independent keywords, and can be arbitrarily bad for
// scenarios, where only exhaustive search is exact.
//
// Every optimizer accepts weighted, unsorted instances. Internally it works on
// the weight-substituted canonical instance and maps the bids back, so
// returned bids are aligned with the caller's keyword order.

#ifndef SBO_OPT_HPP_
#define SBO_OPT_HPP_

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sbo/core.hpp"
#include "sbo/dist.hpp"
#include "sbo/error.hpp"
#include "sbo/eval.hpp"

namespace sbo {

inline constexpr std::size_t kDefaultBruteforceCap = 22;

enum class Guarantee { kExact, kPtas, kTwoApprox, kHeuristic, kExhaustive };

inline const char* GuaranteeName(Guarantee g) {
  switch (g) {
    case Guarantee::kExact:
      return "exact";
    case Guarantee::kPtas:
      return "ptas";
    case Guarantee::kTwoApprox:
      return "two-approx";
    case Guarantee::kHeuristic:
      return "heuristic";
    case Guarantee::kExhaustive:
      return "exhaustive";
  }
  return "unknown";
}

// Bids 1 on canonical keywords before `istar` (1-based), `frac` on keyword
// `istar`, 0 after. istar == 0 is the empty solution.
struct PrefixSolution {
  std::size_t istar = 0;
  double frac = 1.0;

  BidVector ToBids(std::size_t n) const {
    std::vector<double> b(n, 0.0);
    for (std::size_t i = 0; i + 1 < istar && i < n; ++i) b[i] = 1.0;
    if (istar > 0) b.at(istar - 1) = frac;
    return BidVector(std::move(b));
  }

  bool IsInteger() const { return frac == 1.0; }

  // Inverse of ToBids for bid vectors that are fractional prefixes.
  static std::optional<PrefixSolution> FromBids(const BidVector& bids) {
    std::size_t ones = 0;
    while (ones < bids.size() && bids[ones] == 1.0) ++ones;
    std::size_t end = ones;
    double frac = 1.0;
    if (end < bids.size() && bids[end] > 0.0) {
      frac = bids[end];
      ++end;
    }
    for (std::size_t i = end; i < bids.size(); ++i) {
      if (bids[i] != 0.0) return std::nullopt;
    }
    if (end == ones) return PrefixSolution{ones, 1.0};
    return PrefixSolution{end, frac};
  }

  friend bool operator==(const PrefixSolution&,
                         const PrefixSolution&) = default;
};

inline bool IsFractionalPrefix(const BidVector& bids) {
  return PrefixSolution::FromBids(bids).has_value();
}

struct OptReport {
  BidVector bids;
  EvalReport value;
  std::string method;
  Guarantee guarantee = Guarantee::kHeuristic;
  double epsilon = 0.0;
  // Set when the optimizer searched over prefixes of the canonical order.
  std::optional<PrefixSolution> prefix;
};

// Total order used for every argmax: higher value, then fewer keywords with a
// positive bid, then the lexicographically smaller bid vector. Values within
// relative 1e-12 count as equal.
inline bool BetterCandidate(double value_a, const BidVector& a, double value_b,
                            const BidVector& b) {
  const double tol =
      1e-12 * std::max({std::abs(value_a), std::abs(value_b), 1e-300});
  if (value_a - value_b > tol) return true;
  if (value_b - value_a > tol) return false;
  const std::size_t ca = a.CountPositive();
  const std::size_t cb = b.CountPositive();
  if (ca != cb) return ca < cb;
  return std::lexicographical_compare(a.values().begin(), a.values().end(),
                                      b.values().begin(), b.values().end());
}

namespace detail {

// Weight-free, cpc-sorted view of an instance plus the map back.
struct PreparedInstance {
  Instance work;
  std::vector<std::size_t> order;

  BidVector ToCallerOrder(const BidVector& canonical) const {
    return UnpermuteBids(canonical, order);
  }
};

inline PreparedInstance Prepare(const Instance& instance) {
  Instance scaled =
      instance.HasUnitWeights() ? instance : ScaleOutWeights(instance);
  std::vector<std::size_t> order = CanonicalOrder(scaled);
  Instance work = Permute(scaled, order);
  return {std::move(work), std::move(order)};
}

struct Incumbent {
  double value = -1.0;
  BidVector bids;

  bool Offer(double v, const BidVector& b) {
    if (value < 0.0 || BetterCandidate(v, b, value, bids)) {
      value = v;
      bids = b;
      return true;
    }
    return false;
  }
};

// Argmax of f on [lo, hi] for a possibly multi-modal f: a uniform grid finds
// the best cell, golden-section search polishes inside its neighbourhood.
inline double GridThenGolden(const std::function<double(double)>& f, double lo,
                             double hi, int grid_points) {
  double best_x = lo;
  double best_f = f(lo);
  for (int j = 1; j <= grid_points; ++j) {
    const double x = lo + (hi - lo) * j / grid_points;
    const double fx = f(x);
    if (fx > best_f) {
      best_f = fx;
      best_x = x;
    }
  }
  const double step = (hi - lo) / grid_points;
  double a = std::max(lo, best_x - step);
  double b = std::min(hi, best_x + step);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < 100 && b - a > 1e-13; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  const double polished = f1 > f2 ? x1 : x2;
  return f(polished) > best_f ? polished : best_x;
}

// Greedy in canonical order: full bids while the running cost fits, then the
// fraction of the next keyword that lands exactly on the budget.
inline PrefixSolution FixedBudgetPrefix(const Instance& work) {
  const auto& clicks = work.model_as<FixedClicks>().clicks;
  double spent = 0.0;
  for (std::size_t i = 0; i < work.size(); ++i) {
    const double cost = work.cpc(i) * clicks[i];
    if (spent + cost <= work.budget()) {
      spent += cost;
      continue;
    }
    const double frac = (work.budget() - spent) / cost;
    if (frac <= 0.0) return {i, 1.0};
    return {i + 1, frac};
  }
  return {work.size(), 1.0};
}

}  // namespace detail

// Optimal fractional solution for the fixed model: the maximal prefix whose
// cost is min(B, total cost).
inline OptReport OptFixedFractional(const Instance& instance) {
  instance.model_as<FixedClicks>();
  const detail::PreparedInstance prep = detail::Prepare(instance);
  const PrefixSolution prefix = detail::FixedBudgetPrefix(prep.work);
  BidVector bids = prep.ToCallerOrder(prefix.ToBids(instance.size()));
  EvalReport value = EvalFixed(bids, instance);
  return {std::move(bids), std::move(value), "fixed-fractional",
          Guarantee::kExact, 0.0, prefix};
}

// Best 0/1 bid vector for the fixed model. Costs are integerized at
// `resolution * B`; a sparse DP keeps, per reachable cost level, the subset
// with the most clicks (ties by the global candidate order), and every level,
// over budget or not, is then scored with the real objective.
inline OptReport OptFixedInteger(const Instance& instance,
                                 double resolution = 1e-6,
                                 std::size_t max_levels = 5'000'000) {
  instance.model_as<FixedClicks>();
  const detail::PreparedInstance prep = detail::Prepare(instance);
  const Instance& work = prep.work;
  const auto& clicks = work.model_as<FixedClicks>().clicks;
  const std::size_t n = work.size();
  const double unit = work.budget() * resolution;

  struct Entry {
    double clicks = 0.0;
    BidVector bids;
  };
  std::map<std::int64_t, Entry> levels;
  levels[0] = {0.0, BidVector::Zeros(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const auto weight =
        static_cast<std::int64_t>(std::llround(work.cpc(i) * clicks[i] / unit));
    const std::map<std::int64_t, Entry> before = levels;
    for (const auto& [level, entry] : before) {
      std::vector<double> b(entry.bids.values().begin(),
                            entry.bids.values().end());
      b[i] = 1.0;
      Entry candidate{entry.clicks + clicks[i], BidVector(std::move(b))};
      auto [it, inserted] = levels.try_emplace(level + weight, candidate);
      if (!inserted &&
          BetterCandidate(candidate.clicks, candidate.bids, it->second.clicks,
                          it->second.bids)) {
        it->second = std::move(candidate);
      }
    }
    if (levels.size() > max_levels) {
      throw SizeError("integer fixed-model search exceeded " +
                      std::to_string(max_levels) + " cost levels");
    }
  }
  detail::Incumbent best;
  for (const auto& [level, entry] : levels) {
    best.Offer(Value(entry.bids, clicks, work), entry.bids);
  }
  BidVector bids = prep.ToCallerOrder(best.bids);
  EvalReport value = EvalFixed(bids, instance);
  return {std::move(bids), std::move(value), "fixed-integer", Guarantee::kExact,
          0.0, std::nullopt};
}

// Unique root in (lo, hi) of the derivative of
//   g(b) = A (Q + b qi) + P B (Q + b qi) / (Cst + b qi cpci),
// the proportional objective along one prefix interval. The derivative is
// A qi + P B qi (Cst - Q cpci) / (Cst + b qi cpci)^2, whose second term has
// constant sign, so there is at most one root:
//   (Cst + b qi cpci)^2 = -P B (Cst - Q cpci) / A.
// Since the derivative increases through that root, it is a minimum of g; the
// interval's maximum is then at an endpoint.
inline std::optional<double> InteriorStationaryPoint(double A, double P,
                                                     double B, double Q,
                                                     double Cst, double qi,
                                                     double cpci, double lo,
                                                     double hi) {
  const double rate = qi * cpci;
  if (rate <= 0.0 || A <= 0.0 || P <= 0.0) return std::nullopt;
  const double rhs = -P * B * (Cst - Q * cpci) / A;
  if (rhs <= 0.0) return std::nullopt;
  const double root = (std::sqrt(rhs) - Cst) / rate;
  if (root > lo && root < hi) return root;
  return std::nullopt;
}

namespace detail {

// Candidate prefixes for the proportional model on a weight-free canonical
// instance, as positions x in [0, m] over the keywords with q_i cpc_i > 0
// (keywords with q_i cpc_i = 0 are always bid 1). Integer positions, budget
// thresholds per support value of C, and interval stationary points.
inline OptReport OptProportionalOnWork(const Instance& work) {
  const auto& model = work.model_as<ProportionalClicks>();
  const DiscretePmf& pmf = model.total_clicks;
  const double budget = work.budget();
  const std::size_t n = work.size();

  std::vector<std::size_t> paid;
  double free_share = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (model.q[i] * work.cpc(i) > 0.0) {
      paid.push_back(i);
    } else {
      free_share += model.q[i];
    }
  }
  const std::size_t m = paid.size();
  std::vector<double> rate_before(m + 1, 0.0);   // sum q_j cpc_j, j < k
  std::vector<double> share_before(m + 1, free_share);  // sum q_j, j < k
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t i = paid[k];
    rate_before[k + 1] = rate_before[k] + model.q[i] * work.cpc(i);
    share_before[k + 1] = share_before[k] + model.q[i];
  }
  auto keyword_rate = [&](std::size_t k) {
    return model.q[paid[k]] * work.cpc(paid[k]);
  };

  std::vector<double> marked;
  for (std::size_t k = 0; k <= m; ++k) marked.push_back(static_cast<double>(k));
  for (const PmfPoint& pt : pmf.points()) {
    if (pt.value <= 0.0) continue;
    const double level = budget / pt.value;  // cost rate that spends B at C=c
    if (level > rate_before[m]) continue;
    const auto it =
        std::lower_bound(rate_before.begin(), rate_before.end(), level);
    const auto k = static_cast<std::size_t>(it - rate_before.begin()) - 1;
    const double frac = (level - rate_before[k]) / keyword_rate(k);
    marked.push_back(static_cast<double>(k) + std::clamp(frac, 0.0, 1.0));
  }
  std::sort(marked.begin(), marked.end());
  marked.erase(std::unique(marked.begin(), marked.end()), marked.end());

  std::vector<double> candidates = marked;
  for (std::size_t a = 0; a + 1 < marked.size(); ++a) {
    const double lo_pos = marked[a];
    const double hi_pos = marked[a + 1];
    const auto k = static_cast<std::size_t>(std::floor(lo_pos));
    if (k >= m) continue;
    const double lo = lo_pos - static_cast<double>(k);
    const double hi = std::min(1.0, hi_pos - static_cast<double>(k));
    const double mid_rate =
        rate_before[k] + 0.5 * (lo + hi) * keyword_rate(k);
    const double threshold = budget / mid_rate;
    const double under = pmf.PartialExpectation(threshold);
    const double over_prob = pmf.TailProb(threshold);
    const std::optional<double> root = InteriorStationaryPoint(
        under, over_prob, budget, share_before[k], rate_before[k],
        model.q[paid[k]], work.cpc(paid[k]), lo, hi);
    if (root) candidates.push_back(static_cast<double>(k) + *root);
  }

  // Free keywords take bid 1 unless every paid keyword after them is unbid;
  // zero-click ones then take 0 so the result stays a prefix.
  auto bids_at = [&](double pos) {
    std::vector<double> b(n, 0.0);
    const auto whole = static_cast<std::size_t>(std::floor(pos));
    for (std::size_t k = 0; k < std::min(whole, m); ++k) b[paid[k]] = 1.0;
    if (whole < m) b[paid[whole]] = pos - static_cast<double>(whole);
    bool later_bid = false;
    for (std::size_t i = n; i-- > 0;) {
      if (model.q[i] * work.cpc(i) > 0.0) {
        later_bid = later_bid || b[i] > 0.0;
      } else {
        b[i] = (later_bid || work.cpc(i) == 0.0) ? 1.0 : 0.0;
      }
    }
    return BidVector(std::move(b));
  };

  Incumbent best;
  for (double pos : candidates) {
    const BidVector b = bids_at(pos);
    best.Offer(EvalProportional(b, work).value, b);
  }
  OptReport report;
  report.bids = best.bids;
  report.value = EvalReport::Exact(best.value, "proportional-exact");
  report.method = "proportional-exact";
  report.guarantee = Guarantee::kExact;
  report.prefix = PrefixSolution::FromBids(best.bids);
  return report;
}

}  // namespace detail

// Optimal fractional solution for the proportional model. The optimum is a
// prefix, and only O(n + t) prefixes need to be scored.
inline OptReport OptProportionalExact(const Instance& instance) {
  instance.model_as<ProportionalClicks>();
  const detail::PreparedInstance prep = detail::Prepare(instance);
  OptReport report = detail::OptProportionalOnWork(prep.work);
  report.bids = prep.ToCallerOrder(report.bids);
  report.value = EvalProportional(report.bids, instance);
  return report;
}

// Buckets the total-clicks distribution onto powers of (1 + eps), solves the
// bucketed instance exactly and scores its bids on the original instance.
inline OptReport OptProportionalPtas(const Instance& instance, double eps) {
  const auto& model = instance.model_as<ProportionalClicks>();
  if (!(eps > 0.0)) throw ParameterError("epsilon must be positive");
  std::vector<Keyword> keywords(instance.keywords().begin(),
                                instance.keywords().end());
  const Instance bucketed = Instance::Make(
      std::move(keywords), instance.budget(),
      ProportionalClicks{model.q, PmfBucket(model.total_clicks, eps)});
  OptReport report = OptProportionalExact(bucketed);
  report.value = EvalProportional(report.bids, instance);
  report.method = "proportional-ptas";
  report.guarantee = Guarantee::kPtas;
  report.epsilon = eps;
  return report;
}

// Best integer prefix under the independent model, each scored with the PTAS
// at eps' = sqrt(1 + eps) - 1. Some integer prefix is within a factor 2 of
// the integer optimum, so the result is a 2(1 + eps)-approximation.
inline OptReport OptIndependentPrefix(const Instance& instance, double eps) {
  instance.model_as<IndependentClicks>();
  if (!(eps > 0.0 && eps <= 1.0)) {
    throw ParameterError("epsilon must lie in (0, 1]");
  }
  const double inner_eps = std::sqrt(1.0 + eps) - 1.0;
  const detail::PreparedInstance prep = detail::Prepare(instance);
  const std::size_t n = instance.size();
  detail::Incumbent best;
  for (std::size_t k = 0; k <= n; ++k) {
    const BidVector b = PrefixSolution{k, 1.0}.ToBids(n);
    const double v =
        k == 0 ? 0.0 : EvalIndependentPtas(b, prep.work, inner_eps).value;
    best.Offer(v, b);
  }
  OptReport report;
  report.prefix = PrefixSolution::FromBids(best.bids);
  report.bids = prep.ToCallerOrder(best.bids);
  report.value = EvalIndependentPtas(report.bids, instance, inner_eps);
  report.method = "independent-prefix";
  report.guarantee = Guarantee::kTwoApprox;
  report.epsilon = eps;
  return report;
}

// Exhaustive search over all 2^n integer bid vectors (Gray-code order, each
// step toggles one keyword). Candidates close to the incumbent are re-scored
// from scratch so the tie-break sees exact values.
inline OptReport OptScenarioBruteforce(
    const Instance& instance, std::size_t cap = kDefaultBruteforceCap) {
  const auto& model = instance.model_as<ScenarioClicks>();
  const std::size_t n = instance.size();
  if (n > cap || n >= 63) {
    throw SizeError("exhaustive scenario search supports at most " +
                    std::to_string(cap) + " keywords, instance has " +
                    std::to_string(n));
  }
  const std::size_t num_scenarios = model.scenarios.size();
  struct Touch {
    std::size_t scenario;
    double clicks;
    double cost;
  };
  std::vector<std::vector<Touch>> touches(n);
  for (std::size_t s = 0; s < num_scenarios; ++s) {
    for (std::size_t i = 0; i < n; ++i) {
      const double c = model.scenarios[s].clicks[i];
      if (c > 0.0) {
        touches[i].push_back(
            {s, c * instance.keyword(i).weight, c * instance.cpc(i)});
      }
    }
  }
  const double budget = instance.budget();
  std::vector<double> clicks(num_scenarios, 0.0), cost(num_scenarios, 0.0);
  std::vector<double> bids(n, 0.0);
  std::uint64_t mask = 0;

  detail::Incumbent best;
  best.Offer(0.0, BidVector::Zeros(n));
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t g = 1; g < total; ++g) {
    const auto i = static_cast<std::size_t>(std::countr_zero(g));
    mask ^= std::uint64_t{1} << i;
    const double sign = (mask >> i) & 1 ? 1.0 : -1.0;
    bids[i] = sign > 0 ? 1.0 : 0.0;
    for (const Touch& t : touches[i]) {
      clicks[t.scenario] += sign * t.clicks;
      cost[t.scenario] += sign * t.cost;
    }
    double v = 0.0;
    for (std::size_t s = 0; s < num_scenarios; ++s) {
      v += model.scenarios[s].prob *
           detail::ScaledValue(clicks[s], cost[s], budget);
    }
    if (v >= best.value * (1.0 - 1e-9)) {
      const BidVector b{std::vector<double>(bids)};
      best.Offer(EvalScenario(b, instance).value, b);
    }
  }
  OptReport report;
  report.bids = best.bids;
  report.value = EvalScenario(report.bids, instance);
  report.method = "scenario-bruteforce";
  report.guarantee = Guarantee::kExhaustive;
  return report;
}

// Generic prefix baseline for any model. Integer prefixes are scored with the
// model's exact evaluator (PTAS for independent keywords); for the other
// models the fraction on each prefix's last keyword is also refined with a
// 1000-point grid plus golden-section search, and the fixed model adds the
// budget-exhausting prefix, which makes it exact there.
inline OptReport OptPrefixSearch(const Instance& instance, double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) {
    throw ParameterError("epsilon must lie in (0, 1]");
  }
  const detail::PreparedInstance prep = detail::Prepare(instance);
  const Instance& work = prep.work;
  const std::size_t n = work.size();
  const ModelKind kind = work.kind();
  auto score = [&](const BidVector& b) {
    if (kind == ModelKind::kIndependent) {
      return EvalIndependentPtas(b, work, eps).value;
    }
    return EvalExact(b, work).value;
  };

  detail::Incumbent best;
  for (std::size_t k = 0; k <= n; ++k) {
    const BidVector b = PrefixSolution{k, 1.0}.ToBids(n);
    best.Offer(score(b), b);
  }
  if (kind != ModelKind::kIndependent) {
    for (std::size_t k = 1; k <= n; ++k) {
      auto f = [&](double frac) {
        return score(PrefixSolution{k, frac}.ToBids(n));
      };
      const double frac = detail::GridThenGolden(f, 0.0, 1.0, 1000);
      const BidVector b = PrefixSolution{k, frac}.ToBids(n);
      best.Offer(score(b), b);
    }
  }
  if (kind == ModelKind::kFixed) {
    const BidVector b = detail::FixedBudgetPrefix(work).ToBids(n);
    best.Offer(score(b), b);
  }

  OptReport report;
  report.prefix = PrefixSolution::FromBids(best.bids);
  report.bids = prep.ToCallerOrder(best.bids);
  report.value = kind == ModelKind::kIndependent
                     ? EvalIndependentPtas(report.bids, instance, eps)
                     : EvalExact(report.bids, instance);
  report.method = "prefix-search";
  report.guarantee =
      kind == ModelKind::kFixed ? Guarantee::kExact : Guarantee::kHeuristic;
  report.epsilon = kind == ModelKind::kIndependent ? eps : 0.0;
  return report;
}

}  // namespace sbo

#endif  // SBO_OPT_HPP_
