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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dbp/network.hpp"
#include "dbp/scoring.hpp"
#include "dbp/transport.hpp"

namespace dbp {

enum class ObjectiveKind { kTimeOfDetection, kNormalizedScore, kContracts, kThmEvents, kHaaEvents };

inline constexpr ObjectiveKind kAllObjectives[] = {
    ObjectiveKind::kTimeOfDetection, ObjectiveKind::kNormalizedScore, ObjectiveKind::kContracts,
    ObjectiveKind::kThmEvents, ObjectiveKind::kHaaEvents};

std::string_view ObjectiveName(ObjectiveKind kind);
std::optional<ObjectiveKind> ObjectiveFromName(std::string_view name);
bool ObjectiveMinimizes(ObjectiveKind kind);

struct PlacedNode {
  std::string node;
  double metric = 0.0;

  bool operator==(const PlacedNode&) const = default;
};

// Exact top-k (bottom-k for detection time) over the candidates, ties by
// node id. Throws kMetricUnavailable when the metric is undefined (contracts
// without a contracts table, or an events objective for an inactive family).
std::vector<PlacedNode> PlaceSeparable(const std::vector<NodeScore>& candidates,
                                       ObjectiveKind objective, std::size_t k,
                                       bool contracts_available);

enum class SearchMode { kAuto, kGreedy, kExhaustive };

struct ExpectedTimePlacement {
  std::vector<std::string> nodes;  // selection order (greedy) or id order (exhaustive)
  double expected_minutes = 0.0;
  bool exact = false;
};

// Arrival times of every scenario at every candidate, capped at the horizon.
class ArrivalMatrix {
 public:
  ArrivalMatrix(const Network& net, const std::vector<TransportResult>& scenarios,
                const std::vector<std::string>& candidates);

  std::size_t scenarios() const { return scenario_count_; }
  std::size_t candidates() const { return ids_.size(); }
  const std::vector<std::string>& ids() const { return ids_; }
  double horizon() const { return horizon_; }
  double at(std::size_t scenario, std::size_t candidate) const {
    return values_[candidate * scenario_count_ + scenario];
  }
  // Mean over scenarios of the best capped arrival among `chosen`.
  double Expected(const std::vector<std::size_t>& chosen) const;

 private:
  std::vector<std::string> ids_;  // sorted ascending
  std::size_t scenario_count_ = 0;
  double horizon_ = kDefaultHorizonMinutes;
  std::vector<double> values_;  // [candidate][scenario]
};

// Scenario detection time is the minimum capped arrival over the placed
// sensors; the objective is its mean over scenarios. kAuto searches
// exhaustively when there are at most 20 candidates and k <= 5, otherwise
// runs lazy greedy followed by 1-swap local search. Throws kNoScenarios /
// kEmptyCandidateSet.
ExpectedTimePlacement PlaceExpectedTime(const Network& net,
                                        const std::vector<TransportResult>& scenarios,
                                        const std::vector<std::string>& candidates, std::size_t k,
                                        SearchMode mode = SearchMode::kAuto);
ExpectedTimePlacement PlaceExpectedTime(const ArrivalMatrix& m, std::size_t k,
                                        SearchMode mode = SearchMode::kAuto);

struct ParetoPoint {
  std::size_t k = 0;
  double expected_minutes = 0.0;
  std::vector<std::string> nodes;

  bool operator==(const ParetoPoint&) const = default;
};

// One point per k (ascending). When a fresh placement for k would be worse
// than greedily extending the previous point's set, the extension is kept,
// so the curve never increases.
std::vector<ParetoPoint> ParetoSweep(const ArrivalMatrix& m, const std::vector<std::size_t>& k_values);
std::vector<ParetoPoint> ParetoSweep(const Network& net,
                                     const std::vector<TransportResult>& scenarios,
                                     const std::vector<std::string>& candidates,
                                     const std::vector<std::size_t>& k_values);

struct Consensus {
  std::map<std::string, std::size_t> counts;
  std::map<std::string, double> shares;  // count / total selections
  std::size_t total = 0;
};

Consensus ComputeConsensus(const std::vector<std::vector<std::string>>& selections);

}  // namespace dbp
