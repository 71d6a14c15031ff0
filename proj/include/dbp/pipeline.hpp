// Copyright 2026 The Authors.
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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dbp/env_data.hpp"
#include "dbp/hydraulics.hpp"
#include "dbp/network.hpp"
#include "dbp/placement.hpp"
#include "dbp/scenario.hpp"
#include "dbp/scoring.hpp"
#include "dbp/transport.hpp"
#include "json.hpp"

namespace dbp {

struct InjectionConfig {
  enum class Mode { kSources, kFixed, kRandomized };
  Mode mode = Mode::kSources;  // sources: every reservoir and tank
  std::vector<std::string> nodes;  // kFixed
  std::size_t count = 1;           // kRandomized
  std::uint64_t seed = 0;          // kRandomized

  bool operator==(const InjectionConfig&) const = default;
};

struct ParetoConfig {
  std::size_t scenarios = 100;  // seeded single-node injections
  std::uint64_t seed = 7;
  std::vector<std::size_t> k_values;  // empty: 1,5,10,20,40,60,80,100 plus k

  bool operator==(const ParetoConfig&) const = default;
};

struct RunConfig {
  std::string network_path;
  std::string env_data_path;   // empty: synthesize baseline data
  std::string contracts_path;  // empty: contracts from the dataset, if any
  // Family -> built-in model name or custom formula.
  std::map<std::string, std::string> models{{"THM", "sohn_thm"}, {"HAA", "sohn_haa9"}};
  std::string threshold_mode = "EU";
  std::map<std::string, double> thresholds;  // missing families use defaults
  std::map<std::string, double> weights;     // missing families weigh 1
  std::vector<ObjectiveKind> objectives{ObjectiveKind::kTimeOfDetection,
                                        ObjectiveKind::kNormalizedScore};
  std::size_t sensor_count = 5;
  double cutoff = 0.9;
  InjectionConfig injection;
  double horizon_hours = 168.0;
  double interval_minutes = 60.0;
  std::string start = "2024-01-01T00:00:00";  // synthesis start without observations
  std::uint64_t seed = 42;
  GapFill gap_fill = GapFill::kRanges;
  std::optional<Variogram> variogram;
  CompletenessThresholds completeness;
  double initial_chlorine = 1.0;  // mg/L at injection nodes
  std::optional<double> bulk_coeff;      // 1/hour; default from the network
  std::optional<double> reaction_order;  // default from the network
  double detection_limit = kDefaultDetectionLimit;
  double transport_horizon_minutes = kDefaultHorizonMinutes;
  std::optional<double> reaction_time_hours;  // fixed override of water age
  double sohn_haa9_ph_exponent = -0.799;
  ParetoConfig pareto;

  bool operator==(const RunConfig&) const = default;
};

// Throws kConfigError on unknown keys, bad types or invariant violations.
RunConfig ConfigFromJson(const nlohmann::json& j);
nlohmann::json ConfigToJson(const RunConfig& c);
void ValidateConfig(const RunConfig& c);

struct RunInputs {
  std::string inp_text;
  std::optional<std::string> env_text;
  std::optional<std::string> contracts_text;
};

// Reads the files named by the config.
RunInputs LoadInputs(const RunConfig& c);

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

struct RunResult {
  RunConfig config;
  Network network;
  std::vector<Diagnostic> diagnostics;
  FlowSolution flows;
  std::vector<std::string> injection;
  std::optional<CompletenessReport> completeness;
  std::optional<SynthesisReport> synthesis;
  std::size_t timestamp_count = 0;
  std::vector<std::string> families;
  std::map<std::string, std::string> model_descriptions;
  std::map<std::string, double> thresholds;
  std::map<std::string, double> weights;
  bool contracts_available = false;
  std::vector<NodeScore> scores;  // network order
  std::vector<std::string> candidates;
  std::vector<std::pair<ObjectiveKind, std::vector<PlacedNode>>> per_objective;
  std::vector<ParetoPoint> pareto;
  Consensus consensus;
  std::vector<std::string> warnings;
  std::vector<StageTiming> timing;
  double total_seconds = 0.0;
};

// Pieces of the pipeline shared with the scenario tooling.
std::vector<std::string> ResolveInjection(const RunConfig& c, const Network& net);
DecayParams ResolveDecay(const RunConfig& c, const Network& net);
TransportOptions ResolveTransport(const RunConfig& c);
// Synthesis settings over the configured horizon; chlorine from transport.
SynthesisOptions ResolveSynthesis(const RunConfig& c, const TransportResult& transport,
                                  const std::map<std::string, double>& contracts);

struct PreparedNetwork {
  Network net;
  FlowSolution flows;
  std::vector<std::string> injection;
  TransportResult transport;
  std::vector<double> reaction_hours;  // indexed like net.nodes
};

// Parse, solve and propagate from the configured injection.
PreparedNetwork PrepareNetwork(const RunConfig& c, const std::string& inp_text);

// Complete synthetic dataset from the baseline ranges, starting at c.start.
EnvDataset BaselineDataset(const RunConfig& c, const PreparedNetwork& p);

// Reaction time per node (hours): water age, unreached nodes at the
// transport horizon; a fixed override replaces every value.
std::vector<double> ReactionHours(const TransportResult& t, std::optional<double> fixed_hours);

// Model, threshold and name for each configured family.
std::vector<FamilyTarget> ResolveTargets(const RunConfig& c);

// Contaminates `base` for the named families ("THM", "HAA", ...) using the
// configured models and thresholds and the network's reaction times.
ContaminationResult ContaminateScenario(const RunConfig& c, const PreparedNetwork& p,
                                        const EnvDataset& base, double fraction,
                                        const std::set<std::string>& families, std::uint64_t seed);

// Full pipeline. Module errors are rethrown with the stage name prefixed.
RunResult RunPipeline(const RunConfig& config, const RunInputs& inputs);
RunResult Run(const RunConfig& config);

// Result document; timing sits under its own "timing" key.
nlohmann::json ResultToJson(const RunResult& r, bool include_timing = true);
nlohmann::json NetworkGeometryJson(const Network& net);

// Writes config.json, result.json, scores.csv and network.json. The
// directory must not exist yet or be empty.
void WriteRunDirectory(const RunResult& r, const std::filesystem::path& dir);

}  // namespace dbp
