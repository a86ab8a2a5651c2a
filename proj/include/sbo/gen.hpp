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

// Instance constructors: the named worst-case families and seeded random
// instances for property tests.

#ifndef SBO_GEN_HPP_
#define SBO_GEN_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sbo/core.hpp"
#include "sbo/dist.hpp"
#include "sbo/error.hpp"

namespace sbo {

// Simple undirected graph on nodes 1..node_count.
class Graph {
 public:
  using Edge = std::pair<std::size_t, std::size_t>;

  static Graph Make(std::size_t node_count, std::vector<Edge> edges) {
    std::set<Edge> seen;
    for (Edge& e : edges) {
      if (e.first < 1 || e.first > node_count || e.second < 1 ||
          e.second > node_count) {
        throw ValidationError("edge endpoint out of range 1.." +
                              std::to_string(node_count));
      }
      if (e.first == e.second) throw ValidationError("self-loop in graph");
      if (e.first > e.second) std::swap(e.first, e.second);
      if (!seen.insert(e).second) {
        throw ValidationError("duplicate edge " + std::to_string(e.first) +
                              "-" + std::to_string(e.second));
      }
    }
    Graph g;
    g.node_count_ = node_count;
    g.edges_ = std::move(edges);
    return g;
  }

  std::size_t node_count() const { return node_count_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }

 private:
  std::size_t node_count_ = 0;
  std::vector<Edge> edges_;
};

// Three keywords where bidding on {1, 3} always yields 2 clicks, yet every
// prefix (fractional or not) does worse: keyword 2 costs the same as keyword
// 3 but its clicks are a coin flip.
inline Instance GenNonprefixExample() {
  std::vector<Keyword> keywords{{"k1", 0.0, 1.0}, {"k2", 1.0, 1.0},
                                {"k3", 1.0, 1.0}};
  IndependentClicks model{{DiscretePmf::PointMass(1.0),
                           DiscretePmf::FromPoints({{0.0, 0.5}, {1.0, 0.5}}),
                           DiscretePmf::PointMass(1.0)}};
  return Instance::Make(std::move(keywords), 1.0, std::move(model));
}

// 2n keywords with cpc_i = c^i and n scenarios. Scenario s (1-based) gives
// keywords 2s-1 and 2s exactly B / c^(2s-1) clicks each and has probability
// proportional to c^(2s-1). Bidding the odd keywords earns n * alpha * B,
// while any prefix ruins all but one scenario.
inline Instance GenGapExample(std::size_t n, double c, double budget) {
  if (n < 1) throw ParameterError("gap example needs n >= 1");
  if (!(c > 1.0) || !std::isfinite(c)) {
    throw ParameterError("gap example needs c > 1");
  }
  if (!(budget > 0.0) || !std::isfinite(budget)) {
    throw ParameterError("gap example needs a positive budget");
  }
  const std::size_t keywords_count = 2 * n;
  std::vector<double> powers(keywords_count + 1, 1.0);
  for (std::size_t i = 1; i <= keywords_count; ++i) {
    powers[i] = powers[i - 1] * c;
  }
  if (!std::isfinite(powers[keywords_count])) {
    throw ParameterError("c^(2n) overflows double precision");
  }
  double normalizer = 0.0;
  for (std::size_t s = 1; s <= n; ++s) normalizer += powers[2 * s - 1];

  std::vector<Keyword> keywords;
  for (std::size_t i = 1; i <= keywords_count; ++i) {
    keywords.push_back({"k" + std::to_string(i), powers[i], 1.0});
  }
  ScenarioClicks model;
  for (std::size_t s = 1; s <= n; ++s) {
    std::vector<double> clicks(keywords_count, 0.0);
    const double amount = budget / powers[2 * s - 1];
    clicks[2 * s - 2] = amount;
    clicks[2 * s - 1] = amount;
    model.scenarios.push_back({powers[2 * s - 1] / normalizer, clicks});
  }
  return Instance::Make(std::move(keywords), budget, std::move(model));
}

// 1 / sum_s c^(2s-1): the scale of the gap example's probabilities.
inline double GapAlpha(std::size_t n, double c) {
  double normalizer = 0.0;
  double power = c;
  for (std::size_t s = 1; s <= n; ++s) {
    normalizer += power;
    power *= c * c;
  }
  return 1.0 / normalizer;
}

struct CliqueReductionParams {
  std::size_t k = 0;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  double epsilon = 0.0;
  double delta = 0.0;
  double alpha = 0.0;
  double t = 0.0;
  double budget = 0.0;  // K = k(k-1)/2
  double target = 0.0;  // V

  // The three parameter conditions the reduction relies on.
  bool EpsilonOk() const {
    return epsilon > 0.0 && epsilon < 1.0 / static_cast<double>(k + 1);
  }
  bool DeltaOk() const {
    return delta > 0.0 && delta < 1.0 &&
           (1.0 - delta) / 2.0 - static_cast<double>(k) * delta * budget /
                                     (static_cast<double>(nodes) * epsilon) >
               0.0;
  }
  bool TOk() const {
    return static_cast<double>(k + 1) * (budget / epsilon + alpha * t) /
               (budget + alpha * t) <
           1.0 / epsilon;
  }
};

struct CliqueReduction {
  Instance instance;
  CliqueReductionParams params;
};

// Scenario instance with a solution of expected value >= V iff the graph has
// a k-clique. Node keywords (cpc epsilon) come first, then edge keywords
// (cpc 1). The budget K = C(k, 2) buys exactly the edge clicks of one
// k-clique in the likely scenario; each node's rare scenario pays K/epsilon
// cheap clicks unless some chosen edge at that node floods it with t
// expensive ones.
inline CliqueReduction GenCliqueReduction(const Graph& graph, std::size_t k) {
  const std::size_t n = graph.node_count();
  const std::size_t m = graph.edge_count();
  if (k < 2 || k > n) throw ParameterError("clique size k must be in [2, n]");
  if (m == 0) throw ParameterError("clique reduction needs at least one edge");

  CliqueReductionParams p;
  p.k = k;
  p.nodes = n;
  p.edges = m;
  p.budget = static_cast<double>(k * (k - 1) / 2);
  p.epsilon = 1.0 / (2.0 * static_cast<double>(k + 1));
  const double delta_star =
      1.0 / (1.0 + 2.0 * static_cast<double>(k) * p.budget /
                       (static_cast<double>(n) * p.epsilon));
  p.delta = std::pow(10.0, std::floor(std::log10(delta_star / 2.0)));
  p.alpha = 1.0 / (2.0 * static_cast<double>(m));
  p.t = 1.0;
  while (!p.TOk()) {
    p.t *= 2.0;
    if (!std::isfinite(p.t)) throw ParameterError("no admissible t found");
  }
  if (!p.EpsilonOk() || !p.DeltaOk()) {
    throw ParameterError("clique reduction parameters violate their bounds");
  }
  p.target = (1.0 - p.delta) * p.budget +
             p.delta * static_cast<double>(n - k) / static_cast<double>(n) *
                 (p.budget / p.epsilon);

  std::vector<Keyword> keywords;
  for (std::size_t v = 1; v <= n; ++v) {
    keywords.push_back({"node" + std::to_string(v), p.epsilon, 1.0});
  }
  for (const auto& [u, v] : graph.edges()) {
    keywords.push_back(
        {"edge" + std::to_string(u) + "-" + std::to_string(v), 1.0, 1.0});
  }
  ScenarioClicks model;
  std::vector<double> likely(n + m, 0.0);
  std::fill(likely.begin() + static_cast<std::ptrdiff_t>(n), likely.end(),
            1.0);
  model.scenarios.push_back({1.0 - p.delta, likely});
  for (std::size_t v = 1; v <= n; ++v) {
    std::vector<double> clicks(n + m, 0.0);
    clicks[v - 1] = p.budget / p.epsilon;
    for (std::size_t e = 0; e < m; ++e) {
      const auto& [a, b] = graph.edges()[e];
      if (a == v || b == v) clicks[n + e] = p.t;
    }
    model.scenarios.push_back({p.delta / static_cast<double>(n), clicks});
  }
  return {Instance::Make(std::move(keywords), p.budget, std::move(model)), p};
}

struct RandomConfig {
  double cpc_min = 0.1;
  double cpc_max = 10.0;
  double clicks_min = 0.0;
  double clicks_max = 20.0;
  std::size_t max_support = 4;  // per independent pmf; support of C
  std::size_t num_scenarios = 4;
  bool weighted = false;
  double weight_min = 0.5;
  double weight_max = 2.0;

  void Validate() const {
    if (!(cpc_min > 0.0) || !(cpc_max >= cpc_min)) {
      throw ParameterError("cpc range must satisfy 0 < min <= max");
    }
    if (!(clicks_min >= 0.0) || !(clicks_max > clicks_min)) {
      throw ParameterError("click range must satisfy 0 <= min < max");
    }
    if (max_support < 1) throw ParameterError("max_support must be >= 1");
    if (num_scenarios < 1) throw ParameterError("num_scenarios must be >= 1");
    if (weighted && !(weight_min > 0.0 && weight_max >= weight_min)) {
      throw ParameterError("weight range must satisfy 0 < min <= max");
    }
  }
};

namespace detail {

inline double UniformIn(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * UniformUnit(rng);
}

inline std::size_t UniformCount(Rng& rng, std::size_t max) {
  return 1 + static_cast<std::size_t>(UniformUnit(rng) *
                                      static_cast<double>(max));
}

inline std::vector<double> RandomSimplex(Rng& rng, std::size_t size) {
  std::vector<double> w(size);
  double total = 0.0;
  for (double& x : w) {
    x = UniformIn(rng, 0.05, 1.0);
    total += x;
  }
  for (double& x : w) x /= total;
  return w;
}

inline DiscretePmf RandomPmf(Rng& rng, std::size_t max_support, double lo,
                             double hi) {
  const std::size_t size = UniformCount(rng, max_support);
  const std::vector<double> probs = RandomSimplex(rng, size);
  std::vector<PmfPoint> points;
  for (double p : probs) points.push_back({UniformIn(rng, lo, hi), p});
  return DiscretePmf::FromPoints(std::move(points));
}

inline double ExpectedFullCost(const std::vector<Keyword>& keywords,
                               const ClickModel& model) {
  const std::size_t n = keywords.size();
  std::vector<double> mean_clicks(n, 0.0);
  std::visit(
      [&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, FixedClicks>) {
          mean_clicks = m.clicks;
        } else if constexpr (std::is_same_v<M, ProportionalClicks>) {
          for (std::size_t i = 0; i < n; ++i) {
            mean_clicks[i] = m.q[i] * m.total_clicks.Mean();
          }
        } else if constexpr (std::is_same_v<M, IndependentClicks>) {
          for (std::size_t i = 0; i < n; ++i) mean_clicks[i] = m.pmfs[i].Mean();
        } else {
          for (const Scenario& s : m.scenarios) {
            for (std::size_t i = 0; i < n; ++i) {
              mean_clicks[i] += s.prob * s.clicks[i];
            }
          }
        }
      },
      model);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += keywords[i].cpc * mean_clicks[i];
  return total;
}

}  // namespace detail

// Seeded random instance of the requested model, canonicalized. The budget
// puts the expected cost of bidding on everything between 0.2x and 5x of it
// (log-uniformly), so both sides of the budget cap get exercised.
inline Instance GenRandom(ModelKind kind, std::size_t n, std::uint64_t seed,
                          const RandomConfig& config = {}) {
  if (n < 1) throw ParameterError("random instance needs n >= 1");
  config.Validate();
  Rng rng(seed);
  std::vector<Keyword> keywords;
  for (std::size_t i = 0; i < n; ++i) {
    Keyword k{"k" + std::to_string(i + 1),
              detail::UniformIn(rng, config.cpc_min, config.cpc_max), 1.0};
    if (config.weighted) {
      k.weight = detail::UniformIn(rng, config.weight_min, config.weight_max);
    }
    keywords.push_back(std::move(k));
  }
  const double lo = config.clicks_min;
  const double hi = config.clicks_max;
  ClickModel model;
  switch (kind) {
    case ModelKind::kFixed: {
      FixedClicks m;
      for (std::size_t i = 0; i < n; ++i) {
        m.clicks.push_back(detail::UniformIn(rng, lo, hi));
      }
      model = std::move(m);
      break;
    }
    case ModelKind::kProportional: {
      std::vector<double> q = detail::RandomSimplex(rng, n);
      const double scale = static_cast<double>(n);
      model = ProportionalClicks{
          std::move(q),
          detail::RandomPmf(rng, config.max_support, lo * scale, hi * scale)};
      break;
    }
    case ModelKind::kIndependent: {
      IndependentClicks m;
      for (std::size_t i = 0; i < n; ++i) {
        m.pmfs.push_back(detail::RandomPmf(rng, config.max_support, lo, hi));
      }
      model = std::move(m);
      break;
    }
    case ModelKind::kScenario: {
      ScenarioClicks m;
      const std::vector<double> probs =
          detail::RandomSimplex(rng, config.num_scenarios);
      for (double p : probs) {
        std::vector<double> clicks;
        for (std::size_t i = 0; i < n; ++i) {
          // About a third of the entries stay silent in each scenario.
          const bool silent = UniformUnit(rng) < 0.3;
          const double c = detail::UniformIn(rng, lo, hi);
          clicks.push_back(silent ? 0.0 : c);
        }
        m.scenarios.push_back({p, std::move(clicks)});
      }
      model = std::move(m);
      break;
    }
  }
  const double expected_cost = detail::ExpectedFullCost(keywords, model);
  const double ratio = std::exp(detail::UniformIn(rng, std::log(0.2),
                                                  std::log(5.0)));
  const double budget = expected_cost > 0.0 ? expected_cost / ratio : 1.0;
  return Canonicalize(
      Instance::Make(std::move(keywords), budget, std::move(model)));
}

}  // namespace sbo

#endif  // SBO_GEN_HPP_
