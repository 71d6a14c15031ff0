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
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace dbp {

enum class NodeKind { kJunction, kReservoir, kTank };

std::string_view NodeKindName(NodeKind kind);

struct Coord {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Coord&) const = default;
};

// Tank columns kept verbatim so a written file re-reads identically. The
// steady-state model only uses initial_level (head = elevation + level).
struct TankGeometry {
  double initial_level = 0.0;
  double min_level = 0.0;
  double max_level = 0.0;
  double diameter = 0.0;
  double min_volume = 0.0;
  std::string volume_curve;

  bool operator==(const TankGeometry&) const = default;
};

struct Node {
  std::string id;
  NodeKind kind = NodeKind::kJunction;
  double elevation = 0.0;    // m
  double base_demand = 0.0;  // L/s, junctions only
  double head = 0.0;         // m, fixed total head for reservoirs and tanks
  std::optional<Coord> coord;
  double initial_quality = 0.0;  // mg/L chlorine
  std::string pattern;
  std::optional<TankGeometry> tank;

  bool fixed_head() const { return kind != NodeKind::kJunction; }
  bool operator==(const Node&) const = default;
};

enum class LinkStatus { kOpen, kClosed };

struct Pipe {
  std::string id;
  std::string from;
  std::string to;
  double length = 0.0;     // m
  double diameter = 0.0;   // mm
  double roughness = 0.0;  // Hazen-Williams C
  double minor_loss = 0.0;
  LinkStatus status = LinkStatus::kOpen;
  bool check_valve = false;  // "CV" status; transported as open

  bool operator==(const Pipe&) const = default;
};

// Pumps and valves are parsed for their endpoints only; the hydraulic
// solver refuses networks whose connectivity depends on them.
struct UnsupportedLink {
  std::string section;  // "PUMPS" or "VALVES"
  std::string id;
  std::string from;
  std::string to;
  std::vector<std::string> fields;  // remaining columns, verbatim

  bool operator==(const UnsupportedLink&) const = default;
};

struct OpaqueSection {
  std::string name;
  std::vector<std::string> lines;

  bool operator==(const OpaqueSection&) const = default;
};

class Network {
 public:
  std::vector<std::string> title;
  std::vector<Node> nodes;
  std::vector<Pipe> pipes;
  std::vector<UnsupportedLink> unsupported_elements;
  double bulk_coeff = 0.0;       // K_b, 1/hour, >= 0
  double reaction_order = 1.0;   // n
  double quality_timestep = 300.0;  // s
  // Option/time/reaction rows we do not interpret, kept for round-tripping.
  std::vector<std::string> extra_options;
  std::vector<std::string> extra_times;
  std::vector<std::string> extra_reactions;
  std::vector<OpaqueSection> opaque_sections;

  // Rebuilds the id lookup tables; call after mutating nodes or pipes.
  void Reindex();

  std::optional<std::size_t> FindNode(std::string_view id) const;
  std::optional<std::size_t> FindPipe(std::string_view id) const;
  const Node& node(std::string_view id) const;

  std::size_t JunctionCount() const;

  bool operator==(const Network& other) const;

 private:
  std::unordered_map<std::string, std::size_t> node_index_;
  std::unordered_map<std::string, std::size_t> pipe_index_;
};

// Reads an EPANET-style sectioned text file. Units must be one of the SI
// flow units (LPS, LPM, MLD, CMH, CMD); demands are converted to L/s.
Network ParseInp(std::string_view text);
Network ReadInpFile(const std::string& path);

// Writes a file that ParseInp reads back into an equal Network.
std::string WriteInp(const Network& net);

enum class DiagnosticKind {
  kUnreachableJunction,  // no open-pipe path to any fixed-head node
  kIsolatedByClosedPipe,  // reachable only through a closed pipe
  kRequiresUnsupportedLink,  // reachable only through a pump or valve
  kZeroDemand,
};

std::string_view DiagnosticKindName(DiagnosticKind kind);

struct Diagnostic {
  DiagnosticKind kind;
  std::string subject;  // node id, or empty for network-wide diagnostics
  std::string message;
};

std::vector<Diagnostic> ValidateNetwork(const Network& net);

// Undirected adjacency over pipes (optionally only open ones), indexed like
// net.nodes. Each entry is (neighbour node index, pipe index).
std::vector<std::vector<std::pair<std::size_t, std::size_t>>> PipeAdjacency(
    const Network& net, bool open_only);

}  // namespace dbp
