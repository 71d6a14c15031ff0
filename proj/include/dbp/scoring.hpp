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
#include <string>
#include <vector>

namespace dbp {

// Dense concentration cube in ug/L, laid out [node][timestamp][family].
struct ConcentrationTable {
  std::vector<std::string> nodes;
  std::vector<std::string> families;
  std::size_t timestamps = 0;
  std::vector<double> values;

  ConcentrationTable() = default;
  ConcentrationTable(std::vector<std::string> node_ids, std::vector<std::string> family_names,
                     std::size_t timestamp_count);

  double& at(std::size_t node, std::size_t t, std::size_t family) {
    return values[(node * timestamps + t) * families.size() + family];
  }
  double at(std::size_t node, std::size_t t, std::size_t family) const {
    return values[(node * timestamps + t) * families.size() + family];
  }
};

struct EventCounts {
  std::vector<std::string> nodes;
  std::vector<std::string> families;
  std::vector<std::size_t> counts;  // [node][family]

  std::size_t count(std::size_t node, std::size_t family) const {
    return counts[node * families.size() + family];
  }
};

// An event is a timestamp whose concentration strictly exceeds the family's
// threshold. Every family in the table needs a positive threshold.
EventCounts DetectEvents(const ConcentrationTable& table,
                         const std::map<std::string, double>& thresholds);

struct NodeScore {
  std::string node;
  std::map<std::string, std::size_t> events;
  std::map<std::string, double> normalized_percent;
  std::map<std::string, double> weighted;
  double total = 0.0;
  double relative = 0.0;  // total / max total over nodes
  double detection_time = 0.0;  // minutes; +inf if never detected
  double contracts = 0.0;
};

// Two-decimal rounding, halves away from zero. Products that land within
// 1e-9 of a half cent count as halves (e.g. 0.15 * 0.3).
double RoundHalfAway2(double x);

// normalized = round2(events / T * 100 / F); weighted = round2(normalized *
// weight); total = round2(sum weighted); relative = total / max total.
// Missing detection times default to +inf and missing contracts to 0.
std::vector<NodeScore> ScoreNodes(const EventCounts& events, std::size_t timestamp_count,
                                  const std::map<std::string, double>& weights,
                                  const std::map<std::string, double>& detection_minutes = {},
                                  const std::map<std::string, double>& contracts = {});

// Nodes with relative >= cutoff, by relative descending then id ascending.
// Throws kEmptyCandidateSet when nothing qualifies.
std::vector<NodeScore> FilterCandidates(const std::vector<NodeScore>& scores, double cutoff);

// Delimited table: node, per-family events/percent/weighted, total,
// relative, detection_time, contracts.
std::string ScoresCsv(const std::vector<NodeScore>& scores);

}  // namespace dbp
