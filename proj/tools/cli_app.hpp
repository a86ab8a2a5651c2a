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

// Command-line front end. Kept in a header so tests can drive RunCli with
// captured streams.
//
//   sbo evaluate --instance F --bids F [--method auto|exact|ptas|mc]
//                [--epsilon E] [--samples N] [--seed S]
//   sbo optimize --instance F [--method auto|prefix|exact|bruteforce|ptas]
//                [--epsilon E]
//   sbo generate --kind nonprefix|gap|clique|random [--n N] [--c C]
//                [--budget B] [--graph F --k K] [--model M --seed S]
//                [--out F]
//   sbo verify-reduction --graph F --k K
//
// Exit codes: 0 success, 2 validation, 3 size cap, 4 I/O.

#ifndef SBO_TOOLS_CLI_APP_HPP_
#define SBO_TOOLS_CLI_APP_HPP_

#include <cstdint>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sbo/sbo.hpp"

namespace sbo::cli {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kValidation = 2,
  kSize = 3,
  kIo = 4,
};

// SBO_BRUTEFORCE_CAP overrides the exhaustive-search keyword cap.
inline std::size_t BruteforceCap() {
  const char* env = std::getenv("SBO_BRUTEFORCE_CAP");
  if (env == nullptr || *env == '\0') return kDefaultBruteforceCap;
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(env, &pos);
    if (pos != std::string(env).size()) throw std::invalid_argument(env);
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw ValidationError(std::string("SBO_BRUTEFORCE_CAP must be a "
                                      "non-negative integer, got '") +
                          env + "'");
  }
}

namespace detail {

inline void Emit(const std::string& path, const std::string& text,
                 std::ostream& out) {
  if (path == "-") {
    out << text << std::flush;
  } else {
    io::WriteText(path, text);
  }
}

inline io::Json Caps() {
  io::Json caps;
  caps["exactJointSupport"] = kDefaultExactJointCap;
  caps["explicitSupport"] = kDefaultExplicitSupportCap;
  caps["bruteforceKeywords"] = BruteforceCap();
  return caps;
}

struct EvaluateArgs {
  std::string instance;
  std::string bids;
  std::string method = "auto";
  double epsilon = 0.05;
  std::size_t samples = 100'000;
  std::uint64_t seed = 0;
};

inline int RunEvaluate(const EvaluateArgs& a, std::ostream& out) {
  const Instance instance = io::ReadInstance(a.instance);
  const BidVector bids =
      io::BidsFromJson(io::Parse(io::ReadText(a.bids)), instance.size());
  static const std::map<std::string, EvalMethod> kMethods{
      {"auto", EvalMethod::kAuto},
      {"exact", EvalMethod::kExact},
      {"ptas", EvalMethod::kPtas},
      {"mc", EvalMethod::kMonteCarlo}};
  EvalOptions options;
  options.method = kMethods.at(a.method);
  options.epsilon = a.epsilon;
  options.samples = a.samples;
  options.seed = a.seed;
  const EvalReport report = Evaluate(bids, instance, options);

  io::Json doc;
  doc["schemaVersion"] = io::kSchemaVersion;
  doc["command"] = "evaluate";
  doc["model"] = ModelName(instance.kind());
  doc["requestedMethod"] = a.method;
  doc["epsilon"] = a.epsilon;
  doc["samples"] = a.samples;
  doc["seed"] = a.seed;
  doc["rng"] = kRngAlgorithm;
  doc["caps"] = Caps();
  doc["result"] = io::EvalReportToJson(report);
  out << io::Dump(doc) << std::flush;
  return kOk;
}

struct OptimizeArgs {
  std::string instance;
  std::string method = "auto";
  double epsilon = 0.05;
};

inline OptReport Dispatch(const Instance& instance, const std::string& method,
                          double eps, std::size_t cap) {
  const ModelKind kind = instance.kind();
  auto invalid = [&](const char* valid) -> ValidationError {
    return ValidationError("method '" + method + "' is not available for the " +
                           ModelName(kind) + " model; valid methods: " +
                           valid);
  };
  if (method == "prefix") return OptPrefixSearch(instance, eps);
  switch (kind) {
    case ModelKind::kFixed:
      if (method == "auto" || method == "exact") {
        return OptFixedFractional(instance);
      }
      if (method == "bruteforce") return OptFixedInteger(instance);
      throw invalid("auto, exact, bruteforce, prefix");
    case ModelKind::kProportional:
      if (method == "auto" || method == "exact") {
        return OptProportionalExact(instance);
      }
      if (method == "ptas") return OptProportionalPtas(instance, eps);
      throw invalid("auto, exact, ptas, prefix");
    case ModelKind::kIndependent:
      if (method == "auto" || method == "ptas") {
        return OptIndependentPrefix(instance, eps);
      }
      throw invalid("auto, ptas, prefix");
    case ModelKind::kScenario:
      if (method == "bruteforce") return OptScenarioBruteforce(instance, cap);
      if (method == "auto") {
        return instance.size() <= cap ? OptScenarioBruteforce(instance, cap)
                                      : OptPrefixSearch(instance, eps);
      }
      throw invalid("auto, bruteforce, prefix");
  }
  throw invalid("auto");
}

inline int RunOptimize(const OptimizeArgs& a, std::ostream& out) {
  const Instance instance = io::ReadInstance(a.instance);
  const std::size_t cap = BruteforceCap();
  const OptReport report = Dispatch(instance, a.method, a.epsilon, cap);
  io::Json doc;
  doc["schemaVersion"] = io::kSchemaVersion;
  doc["command"] = "optimize";
  doc["model"] = ModelName(instance.kind());
  doc["requestedMethod"] = a.method;
  doc["epsilon"] = a.epsilon;
  doc["caps"] = Caps();
  doc["result"] = io::OptReportToJson(report);
  out << io::Dump(doc) << std::flush;
  return kOk;
}

struct GenerateArgs {
  std::string kind;
  std::size_t n = 0;
  double c = 0.0;
  double budget = 1.0;
  std::string graph;
  std::size_t k = 0;
  std::string model;
  std::uint64_t seed = 0;
  bool weighted = false;
  std::string out = "-";
};

inline int RunGenerate(const GenerateArgs& a, std::ostream& out,
                       std::ostream& err) {
  if (a.kind == "nonprefix") {
    Emit(a.out, io::Dump(io::InstanceToJson(GenNonprefixExample())), out);
  } else if (a.kind == "gap") {
    Emit(a.out, io::Dump(io::InstanceToJson(GenGapExample(a.n, a.c, a.budget))),
         out);
  } else if (a.kind == "clique") {
    if (a.graph.empty()) throw ValidationError("--graph is required");
    const Graph g = io::ParseGraph(io::ReadText(a.graph));
    const CliqueReduction r = GenCliqueReduction(g, a.k);
    const std::string sidecar = io::Dump(io::CliqueParamsToJson(r.params));
    Emit(a.out, io::Dump(io::InstanceToJson(r.instance)), out);
    if (a.out == "-") {
      err << sidecar;
    } else {
      io::WriteText(a.out + ".reduction.json", sidecar);
    }
  } else if (a.kind == "random") {
    if (a.model.empty()) throw ValidationError("--model is required");
    RandomConfig config;
    config.weighted = a.weighted;
    const Instance inst = GenRandom(ParseModelKind(a.model), a.n, a.seed,
                                    config);
    Emit(a.out, io::Dump(io::InstanceToJson(inst)), out);
  } else {
    throw ValidationError("unknown kind '" + a.kind + "'");
  }
  return kOk;
}

struct VerifyArgs {
  std::string graph;
  std::size_t k = 0;
};

inline int RunVerifyReduction(const VerifyArgs& a, std::ostream& out) {
  const Graph g = io::ParseGraph(io::ReadText(a.graph));
  const std::size_t cap = BruteforceCap();
  if (g.node_count() + g.edge_count() > cap) {
    throw SizeError("reduction has " +
                    std::to_string(g.node_count() + g.edge_count()) +
                    " keywords, exhaustive cap is " + std::to_string(cap));
  }
  const CliqueReduction r = GenCliqueReduction(g, a.k);
  const OptReport best = OptScenarioBruteforce(r.instance, cap);
  const bool yes = best.value.value >= r.params.target;
  out << (yes ? "CLIQUE-YES" : "CLIQUE-NO") << "\n"
      << "optimum " << io::FormatNumber(best.value.value) << "\n"
      << "V " << io::FormatNumber(r.params.target) << "\n";
  return kOk;
}

}  // namespace detail

inline int RunCli(int argc, const char* const* argv, std::ostream& out,
                  std::ostream& err) {
  CLI::App app{"Stochastic budget optimization for keyword bidding", "sbo"};
  app.require_subcommand(1);

  detail::EvaluateArgs eval_args;
  auto* evaluate = app.add_subcommand("evaluate", "Expected value of a bid "
                                                  "vector");
  evaluate->add_option("--instance", eval_args.instance, "Instance file")
      ->required();
  evaluate->add_option("--bids", eval_args.bids, "Bids file")->required();
  evaluate->add_option("--method", eval_args.method)
      ->check(CLI::IsMember({"auto", "exact", "ptas", "mc"}));
  evaluate->add_option("--epsilon", eval_args.epsilon);
  evaluate->add_option("--samples", eval_args.samples);
  evaluate->add_option("--seed", eval_args.seed);

  detail::OptimizeArgs opt_args;
  auto* optimize = app.add_subcommand("optimize", "Search for good bids");
  optimize->add_option("--instance", opt_args.instance, "Instance file")
      ->required();
  optimize->add_option("--method", opt_args.method)
      ->check(CLI::IsMember({"auto", "prefix", "exact", "bruteforce", "ptas"}));
  optimize->add_option("--epsilon", opt_args.epsilon);

  detail::GenerateArgs gen_args;
  auto* generate = app.add_subcommand("generate", "Write an instance file");
  generate->add_option("--kind", gen_args.kind)
      ->required()
      ->check(CLI::IsMember({"nonprefix", "gap", "clique", "random"}));
  generate->add_option("--n", gen_args.n);
  generate->add_option("--c", gen_args.c);
  generate->add_option("--budget", gen_args.budget);
  generate->add_option("--graph", gen_args.graph);
  generate->add_option("--k", gen_args.k);
  generate->add_option("--model", gen_args.model);
  generate->add_option("--seed", gen_args.seed);
  generate->add_flag("--weighted", gen_args.weighted);
  generate->add_option("--out", gen_args.out);

  detail::VerifyArgs verify_args;
  auto* verify = app.add_subcommand(
      "verify-reduction", "Check the clique reduction on a small graph");
  verify->add_option("--graph", verify_args.graph)->required();
  verify->add_option("--k", verify_args.k)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*evaluate) return detail::RunEvaluate(eval_args, out);
    if (*optimize) return detail::RunOptimize(opt_args, out);
    if (*generate) return detail::RunGenerate(gen_args, out, err);
    if (*verify) return detail::RunVerifyReduction(verify_args, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const SizeError& e) {
    err << "error: " << e.what() << "\n";
    return kSize;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kValidation;
}

}  // namespace sbo::cli

#endif  // SBO_TOOLS_CLI_APP_HPP_
