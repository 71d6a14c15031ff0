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
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "dbp/hydraulics.hpp"
#include "dbp/network.hpp"

namespace dbp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
// 72-hour simulation horizon in minutes.
inline constexpr double kDefaultHorizonMinutes = 4320.0;
inline constexpr double kDefaultDetectionLimit = 0.01;  // mg/L

// Bulk decay dC/dt = -K_b * C^n.
struct DecayParams {
  double initial_concentration = 0.0;  // C0, mg/L
  double bulk_coeff = 0.0;             // K_b, 1/hour
  double order = 1.0;                  // n
};

// Closed-form solution of the bulk decay ODE after `hours`.
double DecayConcentration(const DecayParams& p, double hours);

struct TransportOptions {
  double detection_limit = kDefaultDetectionLimit;
  double horizon_minutes = kDefaultHorizonMinutes;
  // Pipes carrying |Q| at or below this (L/s) are treated as stagnant.
  double zero_flow = 1e-9;
};

struct TransportResult {
  std::vector<std::string> injection_nodes;
  // Indexed like Network::nodes.
  std::vector<double> arrival_minutes;  // +inf when undetectable
  std::vector<double> water_age_minutes;  // flow-path time, ignores detection; +inf if unreached
  std::vector<double> chlorine;  // mg/L
  double detection_limit = kDefaultDetectionLimit;
  double horizon_minutes = kDefaultHorizonMinutes;

  double arrival(const Network& net, std::string_view node_id) const;
  double concentration(const Network& net, std::string_view node_id) const;
};

// Pipe residence time (minutes) = volume / |flow|; +inf for zero flow.
double PipeTravelMinutes(const Pipe& pipe, double flow_lps);

// Steady-state front arrival and chlorine residual from the injection nodes.
// Injection nodes are held at C0; other sources without inflow carry their
// [QUALITY] initial value (fixed-head nodes) or zero (junctions).
TransportResult Propagate(const Network& net, const FlowSolution& flows,
                          const std::vector<std::string>& injection,
                          const DecayParams& decay,
                          const TransportOptions& options = {});

// `count` distinct node ids drawn uniformly; deterministic for a seed.
// Returned in network order.
std::vector<std::string> RandomizeInjection(const Network& net, std::size_t count,
                                            std::uint64_t seed);

}  // namespace dbp
