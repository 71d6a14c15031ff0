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
#include <string>
#include <string_view>
#include <vector>

#include "dbp/network.hpp"

namespace dbp {

// Hazen-Williams headloss (m) for flow q (L/s, signed) through a pipe of the
// given length (m), diameter (mm) and roughness coefficient.
double HazenWilliamsHeadloss(double length_m, double diameter_mm, double roughness,
                             double flow_lps);

struct FlowOptions {
  double tolerance = 1e-6;  // L/s, max junction mass-balance error
  int max_iterations = 200;
};

struct FlowSolution {
  std::vector<double> pipe_flows;  // L/s, indexed like Network::pipes; + is from->to
  std::vector<double> node_heads;  // m, indexed like Network::nodes
  std::vector<std::string> isolated;  // zero-demand junctions cut off by closed pipes
  double residual = 0.0;           // L/s
  double total_demand = 0.0;       // L/s
  int iterations = 0;

  double flow(const Network& net, std::string_view pipe_id) const;
  double head(const Network& net, std::string_view node_id) const;
};

// Demand-driven steady state by the global gradient (Todini-Pilati) method.
FlowSolution SolveFlows(const Network& net, const FlowOptions& options = {});

// Max over junctions of |inflow - outflow - demand| (L/s).
double MassBalanceResidual(const Network& net, const std::vector<double>& pipe_flows);

}  // namespace dbp
