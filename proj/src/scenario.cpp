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

#include "dbp/scenario.hpp"

#include <algorithm>
#include <deque>
#include <limits>

#include "dbp/error.hpp"
#include "dbp/random.hpp"
#include "dbp/strings.hpp"

namespace dbp {

std::vector<std::string> CentreOutwardOrder(const Network& net) {
  const auto adj = PipeAdjacency(net, false);
  const std::size_t n = net.nodes.size();
  std::vector<std::pair<std::size_t, std::string>> ranked;
  std::vector<std::size_t> dist(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (net.nodes[i].kind != NodeKind::kJunction) continue;
    std::fill(dist.begin(), dist.end(), std::numeric_limits<std::size_t>::max());
    std::deque<std::size_t> queue{i};
    dist[i] = 0;
    std::size_t ecc = 0;
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      ecc = std::max(ecc, dist[u]);
      for (const auto& [v, pipe] : adj[u]) {
        if (dist[v] == std::numeric_limits<std::size_t>::max()) {
          dist[v] = dist[u] + 1;
          queue.push_back(v);
        }
      }
    }
    ranked.emplace_back(ecc, net.nodes[i].id);
  }
  std::sort(ranked.begin(), ranked.end());
  std::vector<std::string> out;
  out.reserve(ranked.size());
  for (auto& r : ranked) out.push_back(std::move(r.second));
  return out;
}

namespace {

// Smallest ratio of model output to its lifted target; >= 1 means done.
double Worst(const std::vector<FamilyTarget>& targets, const EnvRecord& r, double hours,
             double lift) {
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& t : targets) {
    worst = std::min(worst, t.model.Evaluate(r, hours) / (t.threshold * lift));
  }
  return worst;
}

double& Field(EnvRecord& r, int which) {
  switch (which) {
    case 0: return r.toc;
    case 1: return r.temperature;
    case 2: return r.chlorine;
    default: return r.don;
  }
}

void Raise(EnvRecord& r, const std::vector<FamilyTarget>& targets, double hours, double lift,
           const PrecursorBounds& b) {
  if (r.chlorine < b.chlorine_floor) r.chlorine = b.chlorine_floor;
  if (Worst(targets, r, hours, lift) >= 1.0) return;
  const double upper[] = {b.toc, b.temperature, b.chlorine, b.don};
  for (int which = 0; which < 4; ++which) {
    double& field = Field(r, which);
    const double original = field;
    if (original >= upper[which]) continue;
    field = upper[which];
    if (Worst(targets, r, hours, lift) < 1.0) continue;
    // Bisect for the smallest raise that clears every target.
    double lo = original, hi = upper[which];
    for (int it = 0; it < 60 && hi - lo > 1e-9 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      field = mid;
      if (Worst(targets, r, hours, lift) >= 1.0) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    field = hi;
    return;
  }
  throw Error(ErrorCode::kInfeasibleTarget,
              "node " + r.node + " at " + FormatTimestamp(r.timestamp) +
                  ": precursor bounds cannot exceed the threshold");
}

}  // namespace

ContaminationResult Contaminate(const EnvDataset& ds, const Network& net,
                                const ContaminationOptions& options) {
  if (!(options.fraction > 0.0 && options.fraction <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "contamination fraction must lie in (0, 1]");
  }
  if (options.targets.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "contamination needs at least one target family");
  }
  for (const auto& t : options.targets) {
    if (!(t.threshold > 0.0)) throw Error(ErrorCode::kConfigError, "threshold for " + t.family + " must be positive");
  }
  const std::vector<std::string> order = CentreOutwardOrder(net);
  const std::size_t count =
      std::min(order.size(), RoundHalfAwayCount(options.fraction * static_cast<double>(order.size())));

  ContaminationResult out;
  out.contaminated.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count));
  Rng rng(options.seed);
  std::map<std::string, double> lift;
  for (const auto& id : out.contaminated) lift[id] = 1.0 + rng.Uniform(0.05, 0.5);

  out.dataset = ds;
  for (EnvRecord& r : out.dataset.records) {
    auto it = lift.find(r.node);
    if (it == lift.end()) continue;
    auto h = options.reaction_hours.find(r.node);
    const double hours = h == options.reaction_hours.end() ? options.default_reaction_hours : h->second;
    Raise(r, options.targets, hours, it->second, options.bounds);
  }
  return out;
}

}  // namespace dbp
