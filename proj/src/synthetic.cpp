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

#include "dbp/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include "dbp/random.hpp"

namespace dbp {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSizes[] = {60, 80, 100, 125, 150, 200, 250, 300, 400, 500, 600};

// Smallest catalogue diameter (mm) keeping velocity at or below 0.6 m/s.
double SizeFor(double flow_lps) {
  const double d = std::sqrt(4.0 * flow_lps / 1000.0 / (kPi * 0.6)) * 1000.0;
  for (double s : kSizes) {
    if (s >= d) return s;
  }
  return kSizes[std::size(kSizes) - 1];
}

std::string Id(const char* prefix, std::size_t i, int width) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%0*zu", prefix, width, i);
  return buf;
}

Node Junction(std::string id, double elevation, double demand, Coord at) {
  Node n;
  n.id = std::move(id);
  n.kind = NodeKind::kJunction;
  n.elevation = elevation;
  n.base_demand = demand;
  n.coord = at;
  return n;
}

Node Source(std::string id, NodeKind kind, double elevation, double head, Coord at) {
  Node n;
  n.id = std::move(id);
  n.kind = kind;
  n.elevation = elevation;
  n.head = head;
  n.coord = at;
  n.initial_quality = 1.0;
  if (kind == NodeKind::kTank) {
    TankGeometry g;
    g.initial_level = head - elevation;
    g.min_level = 0.5;
    g.max_level = g.initial_level + 3.0;
    g.diameter = 20.0;
    n.tank = g;
  } else {
    n.elevation = head;
  }
  return n;
}

Pipe MakePipe(std::string id, std::string from, std::string to, double length, double diameter) {
  Pipe p;
  p.id = std::move(id);
  p.from = std::move(from);
  p.to = std::move(to);
  p.length = length;
  p.diameter = diameter;
  p.roughness = 130.0;
  return p;
}

// Parser order: junctions, reservoirs, tanks.
void Canonicalize(Network& net) {
  std::stable_sort(net.nodes.begin(), net.nodes.end(), [](const Node& a, const Node& b) {
    return static_cast<int>(a.kind) < static_cast<int>(b.kind);
  });
  net.Reindex();
}

}  // namespace

Network MakeDeadEndNetwork(std::size_t junctions, std::uint64_t seed) {
  Rng rng(seed);
  Network net;
  net.title = {"Synthetic dead-end network"};
  net.bulk_coeff = 0.5 / 24.0;
  net.nodes.push_back(Source("R1", NodeKind::kReservoir, 0.0, 110.0, {-1500.0, 0.0}));
  net.nodes.push_back(Source("T1", NodeKind::kTank, 95.0, 100.0, {0.0, 0.0}));
  net.pipes.push_back(MakePipe("P0", "R1", "T1", 1500.0, 400.0));

  // Tree over indices: 0 is the tank, 1..n the junctions.
  std::vector<std::size_t> parent(junctions + 1, 0);
  std::vector<int> children(junctions + 1, 0);
  std::vector<double> heading(junctions + 1, 0.0), length(junctions + 1, 0.0);
  std::vector<Coord> at(junctions + 1, Coord{0.0, 0.0});
  std::vector<double> elevation(junctions + 1, 70.0), demand(junctions + 1, 0.0);
  for (std::size_t i = 1; i <= junctions; ++i) {
    // Prefer recent nodes so branches grow long; the tank takes up to three.
    std::size_t p = 0;
    for (int attempt = 0; attempt < 64; ++attempt) {
      const std::size_t window = std::min<std::size_t>(i, 8);
      const std::size_t cand = attempt < 32 ? i - 1 - rng.Below(window) : rng.Below(i);
      const int limit = cand == 0 ? 3 : 2;
      if (children[cand] < limit) {
        p = cand;
        break;
      }
    }
    parent[i] = p;
    const double spread = children[p] == 0 ? 0.0 : (children[p] == 1 ? 1.0 : -1.0);
    ++children[p];
    heading[i] = (p == 0 ? 2.0 * kPi * static_cast<double>(i) / 3.0 : heading[p]) +
                 spread * rng.Uniform(0.5, 1.1) + rng.Uniform(-0.2, 0.2);
    length[i] = std::round(rng.Uniform(40.0, 160.0));
    at[i] = {std::round(at[p].x + length[i] * std::cos(heading[i])),
             std::round(at[p].y + length[i] * std::sin(heading[i]))};
    elevation[i] = std::round((elevation[p] - rng.Uniform(0.0, 0.6)) * 100.0) / 100.0;
    demand[i] = std::round(rng.Uniform(0.05, 0.5) * 1000.0) / 1000.0;
  }
  std::vector<double> subtree = demand;
  for (std::size_t i = junctions; i >= 1; --i) subtree[parent[i]] += subtree[i];

  auto name = [](std::size_t i) { return i == 0 ? std::string("T1") : Id("J", i, 3); };
  for (std::size_t i = 1; i <= junctions; ++i) {
    net.nodes.push_back(Junction(name(i), elevation[i], demand[i], at[i]));
    net.pipes.push_back(MakePipe(Id("P", i, 3), name(parent[i]), name(i), length[i], SizeFor(subtree[i])));
  }
  Canonicalize(net);
  return net;
}

Network MakeGridNetwork(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  Network net;
  net.title = {"Synthetic looped grid network"};
  net.bulk_coeff = 0.5 / 24.0;
  const double spacing = 100.0;
  auto name = [cols](std::size_t r, std::size_t c) { return Id("N", r * cols + c + 1, 4); };
  double total = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const double d = std::round(rng.Uniform(0.02, 0.3) * 1000.0) / 1000.0;
      total += d;
      const double elev = std::round(rng.Uniform(20.0, 40.0) * 100.0) / 100.0;
      net.nodes.push_back(Junction(name(r, c), elev, d,
                                   {static_cast<double>(c) * spacing, static_cast<double>(r) * spacing}));
    }
  }
  net.nodes.push_back(Source("R1", NodeKind::kReservoir, 0.0, 100.0, {-spacing, -spacing}));
  net.nodes.push_back(Source("R2", NodeKind::kReservoir, 0.0, 98.0,
                             {static_cast<double>(cols) * spacing, static_cast<double>(rows) * spacing}));
  std::size_t pipe_no = 0;
  auto add = [&](std::string a, std::string b, double diameter) {
    const double len = std::round(spacing * rng.Uniform(0.9, 1.1));
    net.pipes.push_back(MakePipe(Id("L", ++pipe_no, 4), std::move(a), std::move(b), len, diameter));
  };
  const double trunk = SizeFor(total / 2.0);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const bool main_row = r % 5 == 0, main_col = c % 5 == 0;
      if (c + 1 < cols) add(name(r, c), name(r, c + 1), main_row ? 200.0 : 100.0);
      if (r + 1 < rows) add(name(r, c), name(r + 1, c), main_col ? 200.0 : 100.0);
    }
  }
  add("R1", name(0, 0), trunk);
  add("R2", name(rows - 1, cols - 1), trunk);
  Canonicalize(net);
  return net;
}

Network MakeDemoNetwork() {
  Network net;
  net.title = {"Demo network"};
  net.bulk_coeff = 0.5 / 24.0;
  net.nodes.push_back(Source("R1", NodeKind::kReservoir, 0.0, 80.0, {0, 0}));
  const struct {
    const char* id;
    double elev, demand, x, y;
  } js[] = {{"J1", 40, 0.0, 200, 0},   {"J2", 38, 1.2, 400, 0},   {"J3", 37, 0.8, 400, 200},
            {"J4", 36, 1.5, 200, 200}, {"J5", 35, 0.6, 600, 0},   {"J6", 34, 0.9, 800, 0},
            {"J7", 33, 0.4, 600, 200}, {"J8", 30, 0.7, 200, 400}, {"J9", 29, 0.3, 200, 600}};
  for (const auto& j : js) net.nodes.push_back(Junction(j.id, j.elev, j.demand, {j.x, j.y}));
  const struct {
    const char *id, *from, *to;
    double len, diam;
  } ps[] = {{"P1", "R1", "J1", 200, 200}, {"P2", "J1", "J2", 200, 150}, {"P3", "J2", "J3", 200, 100},
            {"P4", "J3", "J4", 200, 100}, {"P5", "J4", "J1", 200, 150}, {"P6", "J2", "J5", 200, 100},
            {"P7", "J5", "J6", 200, 80},  {"P8", "J3", "J7", 200, 80},  {"P9", "J4", "J8", 200, 100},
            {"P10", "J8", "J9", 200, 60}};
  for (const auto& p : ps) net.pipes.push_back(MakePipe(p.id, p.from, p.to, p.len, p.diam));
  Canonicalize(net);
  return net;
}

std::map<std::string, ParameterRange> BaselineRanges() {
  return {{"Temperature", {12.0, 24.0}}, {"pH", {6.8, 8.2}}, {"TOC", {0.5, 2.0}},
          {"DON", {0.1, 0.4}},           {"BR", {2.8, 4.9}}};
}

std::map<std::string, double> MakeContracts(const Network& net, std::uint64_t seed) {
  Rng rng(seed);
  std::map<std::string, double> out;
  for (const Node& n : net.nodes) {
    if (n.kind != NodeKind::kJunction) continue;
    out[n.id] = rng.Uniform() < 0.4 ? 0.0 : 2.5 * static_cast<double>(1 + rng.Below(8));
  }
  return out;
}

}  // namespace dbp
