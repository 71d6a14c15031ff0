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

#include "dbp/transport.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include "dbp/error.hpp"
#include "dbp/random.hpp"

namespace dbp {

double DecayConcentration(const DecayParams& p, double hours) {
  const double c0 = p.initial_concentration;
  if (c0 <= 0.0) return 0.0;
  if (p.bulk_coeff == 0.0 || hours <= 0.0) return c0;
  const double kt = p.bulk_coeff * hours;
  if (p.order == 1.0) return c0 * std::exp(-kt);
  // (C0^(1-n) + (n-1) K t)^(1/(1-n)), written with expm1/log1p so the
  // result stays accurate as n approaches 1.
  const double e = 1.0 - p.order;
  const double base_minus_one = std::expm1(e * std::log(c0)) - e * kt;
  if (base_minus_one <= -1.0) return 0.0;  // concentration exhausted (n < 1)
  const double c = std::exp(std::log1p(base_minus_one) / e);
  return std::min(c, c0);
}

double PipeTravelMinutes(const Pipe& pipe, double flow_lps) {
  const double q = std::abs(flow_lps) / 1000.0;
  if (q == 0.0) return kInfinity;
  const double r = pipe.diameter / 2000.0;
  const double volume = M_PI * r * r * pipe.length;
  return volume / q / 60.0;
}

double TransportResult::arrival(const Network& net, std::string_view node_id) const {
  auto i = net.FindNode(node_id);
  if (!i) throw Error(ErrorCode::kUnknownNode, "unknown node '" + std::string(node_id) + "'");
  return arrival_minutes[*i];
}

double TransportResult::concentration(const Network& net, std::string_view node_id) const {
  auto i = net.FindNode(node_id);
  if (!i) throw Error(ErrorCode::kUnknownNode, "unknown node '" + std::string(node_id) + "'");
  return chlorine[*i];
}

namespace {

struct Edge {
  std::size_t from;
  std::size_t to;
  double flow;     // L/s, > 0 along from->to
  double minutes;  // travel time
};

// Reports one directed cycle among the nodes Kahn's algorithm could not
// order.
std::string DescribeCycle(const Network& net, const std::vector<std::vector<std::size_t>>& out_edges,
                          const std::vector<Edge>& edges, const std::vector<int>& indegree) {
  const std::size_t n = net.nodes.size();
  std::size_t start = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (indegree[i] > 0) {
      start = i;
      break;
    }
  }
  if (start == n) return "";
  // Walk successors that remain in the unresolved set until a node repeats.
  std::vector<int> visit_order(n, -1);
  std::vector<std::size_t> path;
  std::size_t u = start;
  while (visit_order[u] < 0) {
    visit_order[u] = static_cast<int>(path.size());
    path.push_back(u);
    std::size_t next = n;
    for (std::size_t e : out_edges[u]) {
      if (indegree[edges[e].to] > 0) {
        next = edges[e].to;
        break;
      }
    }
    if (next == n) return net.nodes[u].id;
    u = next;
  }
  std::string out;
  for (std::size_t k = static_cast<std::size_t>(visit_order[u]); k < path.size(); ++k) {
    out += net.nodes[path[k]].id + " -> ";
  }
  return out + net.nodes[u].id;
}

}  // namespace

TransportResult Propagate(const Network& net, const FlowSolution& flows,
                          const std::vector<std::string>& injection,
                          const DecayParams& decay, const TransportOptions& options) {
  const std::size_t n = net.nodes.size();
  std::vector<char> injected(n, 0);
  for (const std::string& id : injection) {
    auto i = net.FindNode(id);
    if (!i) throw Error(ErrorCode::kUnknownNode, "injection node '" + id + "' does not exist");
    injected[*i] = 1;
  }

  std::vector<Edge> edges;
  std::vector<std::vector<std::size_t>> out_edges(n), in_edges(n);
  for (std::size_t k = 0; k < net.pipes.size(); ++k) {
    const Pipe& p = net.pipes[k];
    if (p.status == LinkStatus::kClosed) continue;
    const double q = flows.pipe_flows.at(k);
    if (std::abs(q) <= options.zero_flow) continue;
    std::size_t a = *net.FindNode(p.from);
    std::size_t b = *net.FindNode(p.to);
    if (q < 0) std::swap(a, b);
    out_edges[a].push_back(edges.size());
    in_edges[b].push_back(edges.size());
    edges.push_back({a, b, std::abs(q), PipeTravelMinutes(p, q)});
  }

  // Kahn's algorithm; ties resolved by network order for determinism.
  std::vector<int> indegree(n, 0);
  for (const Edge& e : edges) ++indegree[e.to];
  std::deque<std::size_t> ready;
  for (std::size_t i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.push_back(i);
  }
  std::vector<std::size_t> order;
  order.reserve(n);
  while (!ready.empty()) {
    const std::size_t u = ready.front();
    ready.pop_front();
    order.push_back(u);
    for (std::size_t e : out_edges[u]) {
      if (--indegree[edges[e].to] == 0) ready.push_back(edges[e].to);
    }
  }
  if (order.size() != n) {
    throw Error(ErrorCode::kCyclicFlowGraph,
                "flow directions form a cycle: " + DescribeCycle(net, out_edges, edges, indegree));
  }

  TransportResult result;
  result.injection_nodes.clear();
  for (std::size_t i = 0; i < n; ++i) {
    if (injected[i]) result.injection_nodes.push_back(net.nodes[i].id);
  }
  result.detection_limit = options.detection_limit;
  result.horizon_minutes = options.horizon_minutes;
  result.chlorine.assign(n, 0.0);
  result.water_age_minutes.assign(n, kInfinity);
  result.arrival_minutes.assign(n, kInfinity);

  for (const std::size_t v : order) {
    if (injected[v]) {
      result.chlorine[v] = decay.initial_concentration;
      result.water_age_minutes[v] = 0.0;
      continue;
    }
    const auto& incoming = in_edges[v];
    if (incoming.empty()) {
      result.chlorine[v] = net.nodes[v].fixed_head() ? net.nodes[v].initial_quality : 0.0;
      continue;
    }
    double age = kInfinity;
    for (std::size_t e : incoming) {
      age = std::min(age, result.water_age_minutes[edges[e].from] + edges[e].minutes);
    }
    result.water_age_minutes[v] = age;

    auto decayed = [&](const Edge& e) {
      DecayParams p = decay;
      p.initial_concentration = result.chlorine[e.from];
      return DecayConcentration(p, e.minutes / 60.0);
    };
    if (incoming.size() == 1) {
      result.chlorine[v] = decayed(edges[incoming[0]]);
    } else {
      double mass = 0.0, volume = 0.0;
      for (std::size_t e : incoming) {
        mass += edges[e].flow * decayed(edges[e]);
        volume += edges[e].flow;
      }
      result.chlorine[v] = mass / volume;
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (injected[i]) {
      result.arrival_minutes[i] = 0.0;
    } else if (result.chlorine[i] >= options.detection_limit &&
               result.water_age_minutes[i] <= options.horizon_minutes) {
      result.arrival_minutes[i] = result.water_age_minutes[i];
    }
  }
  return result;
}

std::vector<std::string> RandomizeInjection(const Network& net, std::size_t count,
                                            std::uint64_t seed) {
  const std::size_t n = net.nodes.size();
  if (count < 1 || count > n) {
    throw Error(ErrorCode::kCountExceedsNodes,
                "injection count " + std::to_string(count) + " outside [1, " + std::to_string(n) + "]");
  }
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.Below(n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(count);
  std::sort(idx.begin(), idx.end());
  std::vector<std::string> out;
  out.reserve(count);
  for (std::size_t i : idx) out.push_back(net.nodes[i].id);
  return out;
}

}  // namespace dbp
