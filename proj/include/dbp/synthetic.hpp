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
#include <map>
#include <string>

#include "dbp/env_data.hpp"
#include "dbp/network.hpp"

namespace dbp {

// Gravity-fed dead-end tree: reservoir R1 feeds tank T1 through one main,
// and `junctions` junctions branch out of the tank (at most two children
// each). Pipes are sized for their downstream demand.
Network MakeDeadEndNetwork(std::size_t junctions = 227, std::uint64_t seed = 2024);

// Looped rows x cols grid fed by two reservoirs at opposite corners.
Network MakeGridNetwork(std::size_t rows = 25, std::size_t cols = 40, std::uint64_t seed = 2024);

// Ten nodes: one reservoir, one loop, two dead ends.
Network MakeDemoNetwork();

// Precursor ranges for baseline synthetic data (a clean network: low TOC).
std::map<std::string, ParameterRange> BaselineRanges();

// Seeded contracts per junction (multiples of 2.5, many zeros), as in the
// environmental template.
std::map<std::string, double> MakeContracts(const Network& net, std::uint64_t seed);

}  // namespace dbp
