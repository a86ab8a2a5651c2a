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

// JSON documents (instances, bids, reports) and the graph edge-list format.
//
// Instance document, schemaVersion 1:
//
//   {
//     "schemaVersion": 1,
//     "model": "fixed" | "proportional" | "independent" | "scenario",
//     "budget": <number>,
//     "keywords": [{"id": "k1", "cpc": 1, "weight": 2}, ...],  // weight opt.
//     "clicks": [..]                                    // fixed
//     "q": [..], "totalClicks": [{"value": v, "prob": p}, ..]  // proportional
//     "pmfs": [[{"value": v, "prob": p}, ..], ..]       // independent
//     "scenarios": [{"prob": p, "clicks": [..]}, ..]    // scenario
//   }
//
// Floating-point numbers are written with 17 significant digits so every
// double survives a write/read cycle bit for bit.

#ifndef SBO_IO_HPP_
#define SBO_IO_HPP_

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "sbo/core.hpp"
#include "sbo/dist.hpp"
#include "sbo/error.hpp"
#include "sbo/eval.hpp"
#include "sbo/gen.hpp"
#include "sbo/opt.hpp"

namespace sbo::io {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// 17 significant digits: parses back to exactly x.
inline std::string FormatNumber(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

namespace detail {

inline bool IsScalar(const Json& j) { return !j.is_structured(); }

inline bool AllScalar(const Json& j) {
  for (const auto& v : j) {
    if (!IsScalar(v)) return false;
  }
  return true;
}

inline void Emit(const Json& j, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  if (j.is_number_float()) {
    out += FormatNumber(j.get<double>());
  } else if (IsScalar(j)) {
    out += j.dump();
  } else if (j.is_array()) {
    if (j.empty()) {
      out += "[]";
    } else if (AllScalar(j)) {
      out += '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ", ";
        first = false;
        Emit(v, 0, out);
      }
      out += ']';
    } else {
      out += "[\n";
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ",\n";
        first = false;
        out += inner;
        Emit(v, indent + 1, out);
      }
      out += '\n' + pad + ']';
    }
  } else {
    if (j.empty()) {
      out += "{}";
    } else if (AllScalar(j)) {
      out += '{';
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out += ", ";
        first = false;
        out += Json(k).dump() + ": ";
        Emit(v, 0, out);
      }
      out += '}';
    } else {
      out += "{\n";
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += inner + Json(k).dump() + ": ";
        Emit(v, indent + 1, out);
      }
      out += '\n' + pad + '}';
    }
  }
}

}  // namespace detail

// Deterministic pretty printer: two-space indent, flat containers on one
// line, 17 significant digits for floats. Ends with a newline.
inline std::string Dump(const Json& j) {
  std::string out;
  detail::Emit(j, 0, out);
  out += '\n';
  return out;
}

inline Json Parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
}

// "-" reads standard input.
inline std::string ReadText(const std::string& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin),
                       std::istreambuf_iterator<char>());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error while reading '" + path + "'");
  return buf.str();
}

// "-" writes standard output. Files are written to a temporary sibling and
// renamed into place, so readers never observe partial output.
inline void WriteText(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text << std::flush;
    return;
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp + "' for writing");
    out << text;
    if (!out) throw IoError("error while writing '" + tmp + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move output into '" + path + "': " +
                        ec.message());
}

namespace detail {

inline Json PmfToJson(const DiscretePmf& pmf) {
  Json arr = Json::array();
  for (const PmfPoint& p : pmf.points()) {
    arr.push_back(Json{{"value", p.value}, {"prob", p.prob}});
  }
  return arr;
}

inline Json Numbers(std::span<const double> xs) {
  Json arr = Json::array();
  for (double x : xs) arr.push_back(x);
  return arr;
}

template <typename J>
const J& Field(const J& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ValidationError(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

template <typename J>
double Number(const J& j, const char* what) {
  if (!j.is_number()) {
    throw ValidationError(std::string("field '") + what +
                          "' must be a number");
  }
  return j.template get<double>();
}

template <typename J>
std::vector<double> NumberArray(const J& j, const char* what) {
  if (!j.is_array()) {
    throw ValidationError(std::string("field '") + what +
                          "' must be an array");
  }
  std::vector<double> out;
  for (const auto& v : j) out.push_back(Number(v, what));
  return out;
}

template <typename J>
DiscretePmf PmfFromJson(const J& j) {
  if (!j.is_array()) throw ValidationError("pmf must be an array of points");
  std::vector<PmfPoint> points;
  for (const auto& p : j) {
    points.push_back({Number(Field(p, "value"), "value"),
                      Number(Field(p, "prob"), "prob")});
  }
  return DiscretePmf::FromPoints(std::move(points));
}

}  // namespace detail

inline Json InstanceToJson(const Instance& instance) {
  Json doc;
  doc["schemaVersion"] = kSchemaVersion;
  doc["model"] = ModelName(instance.kind());
  doc["budget"] = instance.budget();
  Json keywords = Json::array();
  for (const Keyword& k : instance.keywords()) {
    Json kw{{"id", k.id}, {"cpc", k.cpc}};
    if (k.weight != 1.0) kw["weight"] = k.weight;
    keywords.push_back(std::move(kw));
  }
  doc["keywords"] = std::move(keywords);
  std::visit(
      [&doc](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, FixedClicks>) {
          doc["clicks"] = detail::Numbers(m.clicks);
        } else if constexpr (std::is_same_v<M, ProportionalClicks>) {
          doc["q"] = detail::Numbers(m.q);
          doc["totalClicks"] = detail::PmfToJson(m.total_clicks);
        } else if constexpr (std::is_same_v<M, IndependentClicks>) {
          Json pmfs = Json::array();
          for (const DiscretePmf& p : m.pmfs) {
            pmfs.push_back(detail::PmfToJson(p));
          }
          doc["pmfs"] = std::move(pmfs);
        } else {
          Json scenarios = Json::array();
          for (const Scenario& s : m.scenarios) {
            scenarios.push_back(
                Json{{"prob", s.prob}, {"clicks", detail::Numbers(s.clicks)}});
          }
          doc["scenarios"] = std::move(scenarios);
        }
      },
      instance.model());
  return doc;
}

inline Instance InstanceFromJson(const Json& doc) {
  try {
    const Json& version = detail::Field(doc, "schemaVersion");
    if (!version.is_number_integer() || version.get<int>() != kSchemaVersion) {
      throw ValidationError("unsupported schemaVersion (expected 1)");
    }
    const Json& model_name = detail::Field(doc, "model");
    if (!model_name.is_string()) {
      throw ValidationError("field 'model' must be a string");
    }
    const ModelKind kind = ParseModelKind(model_name.get<std::string>());
    const double budget = detail::Number(detail::Field(doc, "budget"),
                                         "budget");
    const Json& kws = detail::Field(doc, "keywords");
    if (!kws.is_array()) throw ValidationError("'keywords' must be an array");
    std::vector<Keyword> keywords;
    for (const Json& k : kws) {
      Keyword kw;
      const Json& id = detail::Field(k, "id");
      kw.id = id.is_string() ? id.get<std::string>() : id.dump();
      kw.cpc = detail::Number(detail::Field(k, "cpc"), "cpc");
      if (k.contains("weight")) kw.weight = detail::Number(k["weight"], "weight");
      keywords.push_back(std::move(kw));
    }
    ClickModel model;
    switch (kind) {
      case ModelKind::kFixed:
        model = FixedClicks{
            detail::NumberArray(detail::Field(doc, "clicks"), "clicks")};
        break;
      case ModelKind::kProportional:
        model = ProportionalClicks{
            detail::NumberArray(detail::Field(doc, "q"), "q"),
            detail::PmfFromJson(detail::Field(doc, "totalClicks"))};
        break;
      case ModelKind::kIndependent: {
        IndependentClicks m;
        const Json& pmfs = detail::Field(doc, "pmfs");
        if (!pmfs.is_array()) throw ValidationError("'pmfs' must be an array");
        for (const Json& p : pmfs) m.pmfs.push_back(detail::PmfFromJson(p));
        model = std::move(m);
        break;
      }
      case ModelKind::kScenario: {
        ScenarioClicks m;
        const Json& scenarios = detail::Field(doc, "scenarios");
        if (!scenarios.is_array()) {
          throw ValidationError("'scenarios' must be an array");
        }
        for (const Json& s : scenarios) {
          m.scenarios.push_back(
              {detail::Number(detail::Field(s, "prob"), "prob"),
               detail::NumberArray(detail::Field(s, "clicks"), "clicks")});
        }
        model = std::move(m);
        break;
      }
    }
    return Instance::Make(std::move(keywords), budget, std::move(model));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("invalid instance document: ") +
                          e.what());
  }
}

inline Instance ReadInstance(const std::string& path) {
  return InstanceFromJson(Parse(ReadText(path)));
}

inline void WriteInstance(const std::string& path, const Instance& instance) {
  WriteText(path, Dump(InstanceToJson(instance)));
}

inline Json BidsToJson(const BidVector& bids) {
  Json doc;
  doc["schemaVersion"] = kSchemaVersion;
  doc["bids"] = detail::Numbers(bids.values());
  return doc;
}

// Accepts {"bids": [...]} or a bare array.
inline BidVector BidsFromJson(const Json& doc, std::size_t expected_size) {
  const Json& arr = doc.is_array() ? doc : detail::Field(doc, "bids");
  BidVector bids(detail::NumberArray(arr, "bids"));
  if (bids.size() != expected_size) {
    throw DimensionError("bids file has " + std::to_string(bids.size()) +
                         " entries, instance has " +
                         std::to_string(expected_size) + " keywords");
  }
  return bids;
}

inline Json EvalReportToJson(const EvalReport& r) {
  Json j;
  j["value"] = r.value;
  j["lower"] = r.lower;
  j["upper"] = r.upper;
  j["method"] = r.method;
  j["epsilon"] = r.epsilon;
  if (r.samples > 0) {
    j["samples"] = r.samples;
    j["seed"] = r.seed;
    j["rng"] = kRngAlgorithm;
    j["stdError"] = r.std_error;
  }
  return j;
}

inline Json OptReportToJson(const OptReport& r) {
  Json j;
  j["method"] = r.method;
  j["guarantee"] = GuaranteeName(r.guarantee);
  j["epsilon"] = r.epsilon;
  j["bids"] = detail::Numbers(r.bids.values());
  if (r.prefix) {
    j["prefix"] = Json{{"istar", r.prefix->istar}, {"frac", r.prefix->frac}};
  }
  j["value"] = EvalReportToJson(r.value);
  return j;
}

inline Json CliqueParamsToJson(const CliqueReductionParams& p) {
  Json j;
  j["schemaVersion"] = kSchemaVersion;
  j["k"] = p.k;
  j["nodes"] = p.nodes;
  j["edges"] = p.edges;
  j["epsilon"] = p.epsilon;
  j["delta"] = p.delta;
  j["alpha"] = p.alpha;
  j["t"] = p.t;
  j["budget"] = p.budget;
  j["V"] = p.target;
  return j;
}

// Edge list: first line "n m", then m lines "u v" with 1-based node ids.
// Blank lines and lines starting with '#' are ignored.
inline Graph ParseGraph(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    lines.push_back(line);
  }
  if (lines.empty()) throw ValidationError("graph file is empty");
  auto read_pair = [](const std::string& l, long long& a, long long& b) {
    std::istringstream ls(l);
    std::string rest;
    if (!(ls >> a >> b) || (ls >> rest)) {
      throw ValidationError("graph line '" + l + "' is not two integers");
    }
  };
  long long n = 0;
  long long m = 0;
  read_pair(lines[0], n, m);
  if (n < 1 || m < 0) throw ValidationError("graph header must be 'n m'");
  if (static_cast<long long>(lines.size()) - 1 != m) {
    throw ValidationError("graph header announces " + std::to_string(m) +
                          " edges, found " + std::to_string(lines.size() - 1));
  }
  std::vector<Graph::Edge> edges;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    long long u = 0;
    long long v = 0;
    read_pair(lines[i], u, v);
    if (u < 1 || v < 1) throw ValidationError("node ids are 1-based");
    edges.emplace_back(static_cast<std::size_t>(u),
                       static_cast<std::size_t>(v));
  }
  return Graph::Make(static_cast<std::size_t>(n), std::move(edges));
}

inline std::string FormatGraph(const Graph& g) {
  std::string out = std::to_string(g.node_count()) + " " +
                    std::to_string(g.edge_count()) + "\n";
  for (const auto& [u, v] : g.edges()) {
    out += std::to_string(u) + " " + std::to_string(v) + "\n";
  }
  return out;
}

}  // namespace sbo::io

#endif  // SBO_IO_HPP_
