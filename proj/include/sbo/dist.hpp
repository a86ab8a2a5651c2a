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

// Finite click distributions and the stochastic click models built on them.

#ifndef SBO_DIST_HPP_
#define SBO_DIST_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <type_traits>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sbo/error.hpp"

namespace sbo {

// Probability sums within this distance of 1 are renormalized; anything
// further off is rejected.
inline constexpr double kRenormalizeTolerance = 1e-6;
// Sums closer to 1 than this are treated as exactly normalized.
inline constexpr double kRoundingTolerance = 1e-12;

// Identifier of the generator behind every seeded draw; echoed in reports.
inline constexpr const char* kRngAlgorithm = "mt19937_64";

using Rng = std::mt19937_64;

// Uniform double in [0, 1) from the top 53 bits of one draw. Written out so
// sampled streams are identical across standard library implementations.
inline double UniformUnit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct PmfPoint {
  double value = 0.0;
  double prob = 0.0;

  friend bool operator==(const PmfPoint&, const PmfPoint&) = default;
};

// Finite distribution over non-negative values. Support is strictly
// increasing and probabilities are positive and sum to 1.
class DiscretePmf {
 public:
  // Validates, merges duplicate values, sorts and renormalizes.
  static DiscretePmf FromPoints(std::vector<PmfPoint> points) {
    if (points.empty()) throw ValidationError("pmf has no points");
    double total = 0.0;
    for (const PmfPoint& p : points) {
      if (!std::isfinite(p.value) || p.value < 0.0) {
        throw ValidationError("pmf value must be finite and non-negative");
      }
      if (!std::isfinite(p.prob) || p.prob <= 0.0) {
        throw ValidationError("pmf probability must be positive");
      }
      total += p.prob;
    }
    if (std::abs(total - 1.0) > kRenormalizeTolerance) {
      throw ValidationError("pmf probabilities sum to " +
                            std::to_string(total) + ", expected 1");
    }
    std::stable_sort(points.begin(), points.end(),
                     [](const PmfPoint& a, const PmfPoint& b) {
                       return a.value < b.value;
                     });
    std::vector<PmfPoint> merged;
    merged.reserve(points.size());
    for (const PmfPoint& p : points) {
      if (!merged.empty() && merged.back().value == p.value) {
        merged.back().prob += p.prob;
      } else {
        merged.push_back(p);
      }
    }
    // Sums already 1 up to rounding are left alone so that reparsing a
    // written pmf is the identity.
    if (std::abs(total - 1.0) > kRoundingTolerance) {
      for (PmfPoint& p : merged) p.prob /= total;
    }
    return DiscretePmf(std::move(merged));
  }

  static DiscretePmf PointMass(double value) {
    return FromPoints({{value, 1.0}});
  }

  std::span<const PmfPoint> points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  double min_value() const { return points_.front().value; }
  double max_value() const { return points_.back().value; }

  double Mean() const { return prefix_mass_times_value_.back(); }

  // Pr[X > threshold].
  double TailProb(double threshold) const {
    const std::size_t k = CountAtMost(threshold);
    return suffix_prob_[k];
  }

  // Sum over support values v <= threshold of v * p(v).
  double PartialExpectation(double threshold) const {
    const std::size_t k = CountAtMost(threshold);
    return prefix_mass_times_value_[k];
  }

  // Pr[X <= threshold].
  double CdfAt(double threshold) const {
    return 1.0 - TailProb(threshold);
  }

  friend bool operator==(const DiscretePmf& a, const DiscretePmf& b) {
    return a.points_ == b.points_;
  }

 private:
  explicit DiscretePmf(std::vector<PmfPoint> points)
      : points_(std::move(points)) {
    const std::size_t t = points_.size();
    prefix_mass_times_value_.assign(t + 1, 0.0);
    suffix_prob_.assign(t + 1, 0.0);
    for (std::size_t i = 0; i < t; ++i) {
      prefix_mass_times_value_[i + 1] =
          prefix_mass_times_value_[i] + points_[i].value * points_[i].prob;
    }
    for (std::size_t i = t; i-- > 0;) {
      suffix_prob_[i] = suffix_prob_[i + 1] + points_[i].prob;
    }
  }

  // Number of support points with value <= threshold.
  std::size_t CountAtMost(double threshold) const {
    auto it = std::upper_bound(
        points_.begin(), points_.end(), threshold,
        [](double x, const PmfPoint& p) { return x < p.value; });
    return static_cast<std::size_t>(it - points_.begin());
  }

  std::vector<PmfPoint> points_;
  std::vector<double> prefix_mass_times_value_;  // size t+1
  std::vector<double> suffix_prob_;              // size t+1
};

// Index of the geometric bucket that `value` (> 0) falls into for grid
// base * ratio^k, k >= 0. Values sitting on a grid point (up to rounding)
// belong to that grid point's bucket.
inline std::int64_t GeometricBucketIndex(double value, double base,
                                         double ratio) {
  constexpr double kOnGrid = 1e-12;
  const double log_ratio = std::log(ratio);
  auto k = static_cast<std::int64_t>(
      std::floor(std::log(value / base) / log_ratio + 1e-9));
  if (k < 0) k = 0;
  while (k > 0 && base * std::pow(ratio, static_cast<double>(k)) >
                      value * (1.0 + kOnGrid)) {
    --k;
  }
  while (base * std::pow(ratio, static_cast<double>(k + 1)) <=
         value * (1.0 + kOnGrid)) {
    ++k;
  }
  return k;
}

// Rounds every positive support value down onto the grid s*(1+eps)^k, where s
// is the smallest positive support value, and merges the mass per grid point.
// A merged point takes the smaller of its grid value and its smallest source,
// so it never exceeds any source value.
inline DiscretePmf PmfBucket(const DiscretePmf& pmf, double eps) {
  if (!(eps > 0.0)) throw ParameterError("bucket epsilon must be positive");
  double base = 0.0;
  for (const PmfPoint& p : pmf.points()) {
    if (p.value > 0.0) {
      base = p.value;
      break;
    }
  }
  std::vector<PmfPoint> out;
  std::int64_t last_bucket = -1;
  for (const PmfPoint& p : pmf.points()) {
    if (p.value == 0.0) {
      out.push_back(p);
      continue;
    }
    const std::int64_t k = GeometricBucketIndex(p.value, base, 1.0 + eps);
    const double grid = base * std::pow(1.0 + eps, static_cast<double>(k));
    if (k == last_bucket) {
      out.back().prob += p.prob;
    } else {
      // Points arrive sorted, so the first source of a bucket is its minimum.
      out.push_back({std::min(grid, p.value), p.prob});
      last_bucket = k;
    }
  }
  return DiscretePmf::FromPoints(std::move(out));
}

// Clicks per keyword in one outcome of a click model.
struct ClickRealization {
  std::vector<double> clicks;
};

struct FixedClicks {
  std::vector<double> clicks;
};

// clicks_i = q_i * C with a single random total C.
struct ProportionalClicks {
  std::vector<double> q;
  DiscretePmf total_clicks;
};

struct IndependentClicks {
  std::vector<DiscretePmf> pmfs;
};

struct Scenario {
  double prob = 0.0;
  std::vector<double> clicks;
};

struct ScenarioClicks {
  std::vector<Scenario> scenarios;
};

using ClickModel =
    std::variant<FixedClicks, ProportionalClicks, IndependentClicks,
                 ScenarioClicks>;

enum class ModelKind { kFixed, kProportional, kIndependent, kScenario };

inline ModelKind KindOf(const ClickModel& model) {
  return static_cast<ModelKind>(model.index());
}

inline const char* ModelName(ModelKind kind) {
  switch (kind) {
    case ModelKind::kFixed:
      return "fixed";
    case ModelKind::kProportional:
      return "proportional";
    case ModelKind::kIndependent:
      return "independent";
    case ModelKind::kScenario:
      return "scenario";
  }
  return "unknown";
}

inline ModelKind ParseModelKind(const std::string& name) {
  for (ModelKind k : {ModelKind::kFixed, ModelKind::kProportional,
                      ModelKind::kIndependent, ModelKind::kScenario}) {
    if (name == ModelName(k)) return k;
  }
  throw ValidationError("unknown model '" + name +
                        "' (expected fixed, proportional, independent or "
                        "scenario)");
}

namespace detail {

inline void CheckClickVector(const std::vector<double>& clicks,
                             std::size_t n, const char* what) {
  if (clicks.size() != n) {
    throw DimensionError(std::string(what) + " has " +
                         std::to_string(clicks.size()) +
                         " entries, expected " + std::to_string(n));
  }
  for (double c : clicks) {
    if (!std::isfinite(c) || c < 0.0) {
      throw ValidationError(std::string(what) +
                            " must be finite and non-negative");
    }
  }
}

inline void RenormalizeOrThrow(std::span<double> weights, const char* what) {
  double total = 0.0;
  for (double w : weights) total += w;
  if (std::abs(total - 1.0) > kRenormalizeTolerance) {
    throw ValidationError(std::string(what) + " sum to " +
                          std::to_string(total) + ", expected 1");
  }
  if (std::abs(total - 1.0) > kRoundingTolerance) {
    for (double& w : weights) w /= total;
  }
}

}  // namespace detail

// Checks a model against keyword count `n` and renormalizes its weights
// (proportional shares, scenario probabilities).
inline ClickModel ValidateModel(ClickModel model, std::size_t n) {
  std::visit(
      [n](auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, FixedClicks>) {
          detail::CheckClickVector(m.clicks, n, "fixed clicks");
        } else if constexpr (std::is_same_v<M, ProportionalClicks>) {
          detail::CheckClickVector(m.q, n, "proportional shares");
          detail::RenormalizeOrThrow(m.q, "proportional shares");
        } else if constexpr (std::is_same_v<M, IndependentClicks>) {
          if (m.pmfs.size() != n) {
            throw DimensionError("independent model has " +
                                 std::to_string(m.pmfs.size()) +
                                 " pmfs, expected " + std::to_string(n));
          }
        } else {
          if (m.scenarios.empty()) {
            throw ValidationError("scenario model has no scenarios");
          }
          std::vector<double> probs;
          for (const Scenario& s : m.scenarios) {
            if (!std::isfinite(s.prob) || s.prob < 0.0) {
              throw ValidationError("scenario probability must be >= 0");
            }
            detail::CheckClickVector(s.clicks, n, "scenario clicks");
            probs.push_back(s.prob);
          }
          detail::RenormalizeOrThrow(probs, "scenario probabilities");
          for (std::size_t k = 0; k < probs.size(); ++k) {
            m.scenarios[k].prob = probs[k];
          }
        }
      },
      model);
  return model;
}

inline std::size_t ModelDimension(const ClickModel& model) {
  return std::visit(
      [](const auto& m) -> std::size_t {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, FixedClicks>) {
          return m.clicks.size();
        } else if constexpr (std::is_same_v<M, ProportionalClicks>) {
          return m.q.size();
        } else if constexpr (std::is_same_v<M, IndependentClicks>) {
          return m.pmfs.size();
        } else {
          return m.scenarios.empty() ? 0 : m.scenarios.front().clicks.size();
        }
      },
      model);
}

// Sum of per-keyword support sizes for Independent, |support(C)| for
// Proportional, scenario count for Scenario, 1 for Fixed.
inline std::size_t SupportSize(const ClickModel& model) {
  return std::visit(
      [](const auto& m) -> std::size_t {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, FixedClicks>) {
          return 1;
        } else if constexpr (std::is_same_v<M, ProportionalClicks>) {
          return m.total_clicks.size();
        } else if constexpr (std::is_same_v<M, IndependentClicks>) {
          std::size_t total = 0;
          for (const DiscretePmf& p : m.pmfs) total += p.size();
          return total;
        } else {
          return m.scenarios.size();
        }
      },
      model);
}

// Product of per-keyword support sizes, saturating at SIZE_MAX.
inline std::size_t JointSupportSize(const IndependentClicks& model) {
  std::size_t total = 1;
  for (const DiscretePmf& p : model.pmfs) {
    if (total > std::numeric_limits<std::size_t>::max() / p.size()) {
      return std::numeric_limits<std::size_t>::max();
    }
    total *= p.size();
  }
  return total;
}

// Draws realizations from a model. Holds precomputed CDFs; the generator
// state is owned by the caller.
class ModelSampler {
 public:
  explicit ModelSampler(const ClickModel& model) : model_(&model) {
    std::visit(
        [this](const auto& m) {
          using M = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<M, ProportionalClicks>) {
            cdfs_.push_back(CdfOf(m.total_clicks));
          } else if constexpr (std::is_same_v<M, IndependentClicks>) {
            for (const DiscretePmf& p : m.pmfs) cdfs_.push_back(CdfOf(p));
          } else if constexpr (std::is_same_v<M, ScenarioClicks>) {
            std::vector<double> cdf;
            double acc = 0.0;
            for (const Scenario& s : m.scenarios) {
              acc += s.prob;
              cdf.push_back(acc);
            }
            cdfs_.push_back(std::move(cdf));
          }
        },
        *model_);
  }

  ClickRealization Draw(Rng& rng) const {
    return std::visit(
        [this, &rng](const auto& m) -> ClickRealization {
          using M = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<M, FixedClicks>) {
            return {m.clicks};
          } else if constexpr (std::is_same_v<M, ProportionalClicks>) {
            const double total =
                m.total_clicks.points()[Pick(cdfs_[0], rng)].value;
            ClickRealization r;
            r.clicks.reserve(m.q.size());
            for (double q : m.q) r.clicks.push_back(q * total);
            return r;
          } else if constexpr (std::is_same_v<M, IndependentClicks>) {
            ClickRealization r;
            r.clicks.reserve(m.pmfs.size());
            for (std::size_t i = 0; i < m.pmfs.size(); ++i) {
              r.clicks.push_back(m.pmfs[i].points()[Pick(cdfs_[i], rng)].value);
            }
            return r;
          } else {
            return {m.scenarios[Pick(cdfs_[0], rng)].clicks};
          }
        },
        *model_);
  }

 private:
  static std::vector<double> CdfOf(const DiscretePmf& pmf) {
    std::vector<double> cdf;
    double acc = 0.0;
    for (const PmfPoint& p : pmf.points()) {
      acc += p.prob;
      cdf.push_back(acc);
    }
    return cdf;
  }

  static std::size_t Pick(const std::vector<double>& cdf, Rng& rng) {
    const double u = UniformUnit(rng);
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;  // u beyond a cdf that sums to 1 - ulp
    return static_cast<std::size_t>(it - cdf.begin());
  }

  const ClickModel* model_;
  std::vector<std::vector<double>> cdfs_;
};

// One realization, deterministic in `seed`.
inline ClickRealization Sample(const ClickModel& model, std::uint64_t seed) {
  Rng rng(seed);
  return ModelSampler(model).Draw(rng);
}

}  // namespace sbo

#endif  // SBO_DIST_HPP_
