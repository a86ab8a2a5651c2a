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

// Problem representation and the budget-scaled click objective.
//
// For bids b in [0,1]^n and one click realization,
//
//   value(b) = sum_i b_i w_i clicks_i / max(1, sum_i b_i cpc_i clicks_i / B)
//
// i.e. all clicks when the day's cost stays within budget B, otherwise the
// clicks bought before the budget runs out in a well-mixed day. Weights w_i
// default to 1 (plain click counting).

#ifndef SBO_CORE_HPP_
#define SBO_CORE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sbo/dist.hpp"
#include "sbo/error.hpp"

namespace sbo {

struct Keyword {
  std::string id;
  double cpc = 0.0;
  double weight = 1.0;

  friend bool operator==(const Keyword&, const Keyword&) = default;
};

// Keywords, budget and a click model of matching dimension. Immutable once
// built; Make() is the only way in and enforces every invariant.
class Instance {
 public:
  static Instance Make(std::vector<Keyword> keywords, double budget,
                       ClickModel model) {
    if (keywords.empty()) throw ValidationError("instance has no keywords");
    if (!std::isfinite(budget) || budget <= 0.0) {
      throw ValidationError("budget must be positive");
    }
    for (const Keyword& k : keywords) {
      if (!std::isfinite(k.cpc) || k.cpc < 0.0) {
        throw ValidationError("keyword '" + k.id +
                              "' has a negative or non-finite cpc");
      }
      if (!std::isfinite(k.weight) || k.weight <= 0.0) {
        throw InvalidWeightError("keyword '" + k.id +
                                 "' has a non-positive weight");
      }
    }
    ClickModel validated = ValidateModel(std::move(model), keywords.size());
    return Instance(std::move(keywords), budget, std::move(validated));
  }

  std::size_t size() const { return keywords_.size(); }
  std::span<const Keyword> keywords() const { return keywords_; }
  const Keyword& keyword(std::size_t i) const { return keywords_[i]; }
  double cpc(std::size_t i) const { return keywords_[i].cpc; }
  double budget() const { return budget_; }
  const ClickModel& model() const { return model_; }
  ModelKind kind() const { return KindOf(model_); }

  template <typename M>
  const M& model_as() const {
    if (const M* m = std::get_if<M>(&model_)) return *m;
    throw ModelMismatchError(std::string("operation needs a different click "
                                         "model; instance model is ") +
                             ModelName(kind()));
  }

  bool HasUnitWeights() const {
    return std::all_of(keywords_.begin(), keywords_.end(),
                       [](const Keyword& k) { return k.weight == 1.0; });
  }

  bool IsCanonical() const {
    for (std::size_t i = 1; i < keywords_.size(); ++i) {
      if (keywords_[i].cpc < keywords_[i - 1].cpc) return false;
    }
    return true;
  }

  friend bool operator==(const Instance& a, const Instance& b);

 private:
  Instance(std::vector<Keyword> keywords, double budget, ClickModel model)
      : keywords_(std::move(keywords)),
        budget_(budget),
        model_(std::move(model)) {}

  std::vector<Keyword> keywords_;
  double budget_;
  ClickModel model_;
};

inline bool operator==(const Instance& a, const Instance& b) {
  if (a.keywords_ != b.keywords_ || a.budget_ != b.budget_ ||
      a.model_.index() != b.model_.index()) {
    return false;
  }
  return std::visit(
      [&b](const auto& ma) {
        using M = std::decay_t<decltype(ma)>;
        const M& mb = std::get<M>(b.model_);
        if constexpr (std::is_same_v<M, FixedClicks>) {
          return ma.clicks == mb.clicks;
        } else if constexpr (std::is_same_v<M, ProportionalClicks>) {
          return ma.q == mb.q && ma.total_clicks == mb.total_clicks;
        } else if constexpr (std::is_same_v<M, IndependentClicks>) {
          return ma.pmfs == mb.pmfs;
        } else {
          if (ma.scenarios.size() != mb.scenarios.size()) return false;
          for (std::size_t s = 0; s < ma.scenarios.size(); ++s) {
            if (ma.scenarios[s].prob != mb.scenarios[s].prob ||
                ma.scenarios[s].clicks != mb.scenarios[s].clicks) {
              return false;
            }
          }
          return true;
        }
      },
      a.model_);
}

// Fractional bids, one per keyword, each in [0, 1].
class BidVector {
 public:
  BidVector() = default;
  explicit BidVector(std::vector<double> bids) : bids_(std::move(bids)) {
    for (double b : bids_) {
      if (!(b >= 0.0 && b <= 1.0)) {
        throw ValidationError("bids must lie in [0, 1]");
      }
    }
  }

  static BidVector Zeros(std::size_t n) {
    return BidVector(std::vector<double>(n, 0.0));
  }
  static BidVector Ones(std::size_t n) {
    return BidVector(std::vector<double>(n, 1.0));
  }
  // 1 on the given 0-based indices, 0 elsewhere.
  static BidVector OnSet(std::size_t n, std::span<const std::size_t> on) {
    std::vector<double> b(n, 0.0);
    for (std::size_t i : on) b.at(i) = 1.0;
    return BidVector(std::move(b));
  }

  std::size_t size() const { return bids_.size(); }
  double operator[](std::size_t i) const { return bids_[i]; }
  std::span<const double> values() const { return bids_; }

  std::size_t CountPositive() const {
    return static_cast<std::size_t>(
        std::count_if(bids_.begin(), bids_.end(),
                      [](double b) { return b > 0.0; }));
  }

  friend bool operator==(const BidVector&, const BidVector&) = default;

 private:
  std::vector<double> bids_;
};

// Evaluator output. `lower`/`upper` bracket the true expectation; exact
// methods collapse them onto `value`.
struct EvalReport {
  double value = 0.0;
  std::string method;
  double epsilon = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  // Monte Carlo only.
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double std_error = 0.0;

  static EvalReport Exact(double value, std::string method) {
    return {value, std::move(method), 0.0, value, value, 0, 0, 0.0};
  }
};

struct ClicksAndCost {
  double clicks = 0.0;
  double cost = 0.0;
};

namespace detail {

inline void CheckSameLength(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": length " + std::to_string(a) +
                         " does not match " + std::to_string(b) +
                         " keywords");
  }
}

// Budget-scaled value from aggregate (weighted) clicks and cost.
inline double ScaledValue(double clicks, double cost, double budget) {
  if (clicks <= 0.0) return 0.0;
  if (cost <= budget) return clicks;
  return clicks / (cost / budget);
}

}  // namespace detail

// Weighted clicks sum_i b_i w_i clicks_i and cost sum_i b_i cpc_i clicks_i.
inline ClicksAndCost Aggregate(const BidVector& bids,
                               std::span<const double> clicks,
                               const Instance& instance) {
  detail::CheckSameLength(bids.size(), instance.size(), "bids");
  detail::CheckSameLength(clicks.size(), instance.size(), "realization");
  ClicksAndCost out;
  for (std::size_t i = 0; i < bids.size(); ++i) {
    const double c = bids[i] * clicks[i];
    out.clicks += c * instance.keyword(i).weight;
    out.cost += c * instance.cpc(i);
  }
  return out;
}

inline ClicksAndCost Aggregate(const BidVector& bids,
                               const ClickRealization& realization,
                               const Instance& instance) {
  return Aggregate(bids, realization.clicks, instance);
}

// Objective for one realization. Zero clicks give 0; zero cost with positive
// clicks is never budget limited.
inline double Value(const BidVector& bids, std::span<const double> clicks,
                    const Instance& instance) {
  const ClicksAndCost agg = Aggregate(bids, clicks, instance);
  return detail::ScaledValue(agg.clicks, agg.cost, instance.budget());
}

inline double Value(const BidVector& bids, const ClickRealization& realization,
                    const Instance& instance) {
  return Value(bids, realization.clicks, instance);
}

// Canonical keyword order: non-decreasing cpc, ties kept in input order.
// order[k] is the input index of the k-th canonical keyword.
inline std::vector<std::size_t> CanonicalOrder(const Instance& instance) {
  std::vector<std::size_t> order(instance.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&instance](std::size_t a, std::size_t b) {
                     return instance.cpc(a) < instance.cpc(b);
                   });
  return order;
}

// Reorders keywords and every per-keyword model parameter by `order`.
inline Instance Permute(const Instance& instance,
                        std::span<const std::size_t> order) {
  detail::CheckSameLength(order.size(), instance.size(), "permutation");
  auto pick = [&order](const auto& v) {
    std::decay_t<decltype(v)> out;
    out.reserve(order.size());
    for (std::size_t i : order) out.push_back(v[i]);
    return out;
  };
  std::vector<Keyword> keywords;
  for (std::size_t i : order) keywords.push_back(instance.keyword(i));
  ClickModel model = std::visit(
      [&pick](const auto& m) -> ClickModel {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, FixedClicks>) {
          return FixedClicks{pick(m.clicks)};
        } else if constexpr (std::is_same_v<M, ProportionalClicks>) {
          return ProportionalClicks{pick(m.q), m.total_clicks};
        } else if constexpr (std::is_same_v<M, IndependentClicks>) {
          return IndependentClicks{pick(m.pmfs)};
        } else {
          ScenarioClicks out;
          for (const Scenario& s : m.scenarios) {
            out.scenarios.push_back({s.prob, pick(s.clicks)});
          }
          return out;
        }
      },
      instance.model());
  return Instance::Make(std::move(keywords), instance.budget(),
                        std::move(model));
}

inline Instance Canonicalize(const Instance& instance) {
  if (instance.IsCanonical()) return instance;
  return Permute(instance, CanonicalOrder(instance));
}

// Maps bids given in canonical order back to the input order.
inline BidVector UnpermuteBids(const BidVector& canonical_bids,
                               std::span<const std::size_t> order) {
  std::vector<double> out(order.size(), 0.0);
  for (std::size_t k = 0; k < order.size(); ++k) {
    out[order[k]] = canonical_bids[k];
  }
  return BidVector(std::move(out));
}

inline BidVector PermuteBids(const BidVector& bids,
                             std::span<const std::size_t> order) {
  std::vector<double> out;
  out.reserve(order.size());
  for (std::size_t i : order) out.push_back(bids[i]);
  return BidVector(std::move(out));
}

// Substitutes clicks'_i = w_i clicks_i and cpc'_i = cpc_i / w_i, keeping the
// keyword order. The unweighted objective of the result equals the weighted
// objective of the input for every bid vector and realization.
inline Instance ScaleOutWeights(const Instance& instance) {
  const std::size_t n = instance.size();
  std::vector<double> w(n);
  std::vector<Keyword> keywords;
  for (std::size_t i = 0; i < n; ++i) {
    const Keyword& k = instance.keyword(i);
    if (!(k.weight > 0.0)) {
      throw InvalidWeightError("keyword '" + k.id +
                               "' has a non-positive weight");
    }
    w[i] = k.weight;
    keywords.push_back({k.id, k.cpc / k.weight, 1.0});
  }
  auto scale = [&w](std::vector<double> clicks) {
    for (std::size_t i = 0; i < clicks.size(); ++i) clicks[i] *= w[i];
    return clicks;
  };
  ClickModel model = std::visit(
      [&](const auto& m) -> ClickModel {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, FixedClicks>) {
          return FixedClicks{scale(m.clicks)};
        } else if constexpr (std::is_same_v<M, ProportionalClicks>) {
          // w_i q_i C = (w_i q_i / W) (W C) keeps the shares normalized.
          std::vector<double> q = scale(m.q);
          const double total_weight = std::accumulate(q.begin(), q.end(), 0.0);
          for (double& x : q) x /= total_weight;
          std::vector<PmfPoint> points(m.total_clicks.points().begin(),
                                       m.total_clicks.points().end());
          for (PmfPoint& p : points) p.value *= total_weight;
          return ProportionalClicks{std::move(q),
                                    DiscretePmf::FromPoints(std::move(points))};
        } else if constexpr (std::is_same_v<M, IndependentClicks>) {
          IndependentClicks out;
          for (std::size_t i = 0; i < n; ++i) {
            std::vector<PmfPoint> points(m.pmfs[i].points().begin(),
                                         m.pmfs[i].points().end());
            for (PmfPoint& p : points) p.value *= w[i];
            out.pmfs.push_back(DiscretePmf::FromPoints(std::move(points)));
          }
          return out;
        } else {
          ScenarioClicks out;
          for (const Scenario& s : m.scenarios) {
            out.scenarios.push_back({s.prob, scale(s.clicks)});
          }
          return out;
        }
      },
      instance.model());
  return Instance::Make(std::move(keywords), instance.budget(),
                        std::move(model));
}

// Weight substitution followed by re-canonicalization.
inline Instance ApplyClickWeights(const Instance& instance) {
  return Canonicalize(ScaleOutWeights(instance));
}

}  // namespace sbo

#endif  // SBO_CORE_HPP_
