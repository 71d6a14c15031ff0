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

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dbp/dbp_models.hpp"
#include "dbp/env_data.hpp"
#include "dbp/network.hpp"

namespace dbp {

struct FamilyTarget {
  std::string family;
  DbpModel model;
  double threshold = 0.0;  // ug/L
};

// Upper bounds for raised precursors.
struct PrecursorBounds {
  double toc = 50.0;          // mg/L
  double temperature = 35.0;  // C
  double chlorine = 5.0;      // mg/L
  double don = 50.0;          // mg/L
  double chlorine_floor = 0.2;  // mg/L; chlorine is lifted to this first
};

struct ContaminationOptions {
  double fraction = 0.2;  // (0, 1]
  std::vector<FamilyTarget> targets;
  std::uint64_t seed = 0;
  // Reaction time per node (hours); nodes not listed use default_reaction_hours.
  std::map<std::string, double> reaction_hours;
  double default_reaction_hours = 72.0;
  PrecursorBounds bounds;
};

struct ContaminationResult {
  EnvDataset dataset;
  std::vector<std::string> contaminated;  // in selection order
};

// Junctions ordered centre-outward: hop-count eccentricity ascending over
// the pipe graph, ties by id.
std::vector<std::string> CentreOutwardOrder(const Network& net);

// Picks round(fraction * junctions) junctions centre-outward and raises TOC,
// temperature, chlorine and DON on every one of their records until each
// targeted model exceeds its threshold by a seeded per-node margin of
// 5-50 %. Other nodes' records are copied unchanged. Throws
// kInfeasibleTarget when the bounds cannot reach a threshold.
ContaminationResult Contaminate(const EnvDataset& ds, const Network& net,
                                const ContaminationOptions& options);

}  // namespace dbp
