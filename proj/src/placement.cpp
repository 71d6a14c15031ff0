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

#include "dbp/placement.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

#include "dbp/error.hpp"

namespace dbp {

std::string_view ObjectiveName(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::kTimeOfDetection: return "time_of_detection";
    case ObjectiveKind::kNormalizedScore: return "normalized_score";
    case ObjectiveKind::kContracts: return "contracts";
    case ObjectiveKind::kThmEvents: return "thm_events";
    case ObjectiveKind::kHaaEvents: return "haa_events";
  }
  return "";
}

std::optional<ObjectiveKind> ObjectiveFromName(std::string_view name) {
  for (ObjectiveKind k : kAllObjectives) {
    if (ObjectiveName(k) == name) return k;
  }
  return std::nullopt;
}

bool ObjectiveMinimizes(ObjectiveKind kind) { return kind == ObjectiveKind::kTimeOfDetection; }

namespace {

double Metric(const NodeScore& s, ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::kTimeOfDetection: return s.detection_time;
    case ObjectiveKind::kNormalizedScore: return s.total;
    case ObjectiveKind::kContracts: return s.contracts;
    case ObjectiveKind::kThmEvents: return static_cast<double>(s.events.at("THM"));
    case ObjectiveKind::kHaaEvents: return static_cast<double>(s.events.at("HAA"));
  }
  return 0.0;
}

}  // namespace

std::vector<PlacedNode> PlaceSeparable(const std::vector<NodeScore>& candidates,
                                       ObjectiveKind objective, std::size_t k,
                                       bool contracts_available) {
  if (candidates.empty()) throw Error(ErrorCode::kEmptyCandidateSet, "no candidates to place");
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "sensor count must be positive");
  if (objective == ObjectiveKind::kContracts && !contracts_available) {
    throw Error(ErrorCode::kMetricUnavailable, "contracts objective needs a contracts table");
  }
  const char* family = objective == ObjectiveKind::kThmEvents   ? "THM"
                       : objective == ObjectiveKind::kHaaEvents ? "HAA"
                                                                : nullptr;
  if (family) {
    for (const auto& c : candidates) {
      if (!c.events.count(family)) {
        throw Error(ErrorCode::kMetricUnavailable,
                    std::string(ObjectiveName(objective)) + " needs the " + family + " family");
      }
    }
  }
  std::vector<PlacedNode> all;
  all.reserve(candidates.size());
  for (const auto& c : candidates) all.push_back({c.node, Metric(c, objective)});
  const bool minimize = ObjectiveMinimizes(objective);
  auto better = [minimize](const PlacedNode& a, const PlacedNode& b) {
    if (a.metric != b.metric) return minimize ? a.metric < b.metric : a.metric > b.metric;
    return a.node < b.node;
  };
  const std::size_t take = std::min(k, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(take), all.end(), better);
  all.resize(take);
  return all;
}

ArrivalMatrix::ArrivalMatrix(const Network& net, const std::vector<TransportResult>& scenarios,
                             const std::vector<std::string>& candidates) {
  if (scenarios.empty()) throw Error(ErrorCode::kNoScenarios, "expected-time placement needs scenarios");
  if (candidates.empty()) throw Error(ErrorCode::kEmptyCandidateSet, "no candidates to place");
  ids_ = candidates;
  std::sort(ids_.begin(), ids_.end());
  ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
  scenario_count_ = scenarios.size();
  horizon_ = scenarios.front().horizon_minutes;
  std::vector<std::size_t> node_index;
  node_index.reserve(ids_.size());
  for (const auto& id : ids_) {
    auto idx = net.FindNode(id);
    if (!idx) throw Error(ErrorCode::kUnknownNode, "candidate '" + id + "' is not a network node");
    node_index.push_back(*idx);
  }
  values_.resize(ids_.size() * scenario_count_);
  for (std::size_t s = 0; s < scenario_count_; ++s) {
    const auto& arrival = scenarios[s].arrival_minutes;
    if (arrival.size() != net.nodes.size()) {
      throw Error(ErrorCode::kInvalidArgument, "scenario does not cover every network node");
    }
    const double cap = scenarios[s].horizon_minutes;
    for (std::size_t c = 0; c < ids_.size(); ++c) {
      values_[c * scenario_count_ + s] = std::min(arrival[node_index[c]], cap);
    }
  }
}

double ArrivalMatrix::Expected(const std::vector<std::size_t>& chosen) const {
  double sum = 0.0;
  for (std::size_t s = 0; s < scenario_count_; ++s) {
    double best = horizon_;
    for (std::size_t c : chosen) best = std::min(best, at(s, c));
    sum += best;
  }
  return sum / static_cast<double>(scenario_count_);
}

namespace {

struct Greedy {
  std::vector<std::size_t> chosen;
  std::vector<double> values;  // expected minutes after each pick
};

// Lazy greedy from `start`, adding until `k` sensors are placed. Upper
// bounds stay valid because marginal gains only shrink as sensors are added.
Greedy GreedyExtend(const ArrivalMatrix& m, std::vector<std::size_t> start, std::size_t k) {
  const std::size_t s_count = m.scenarios();
  const double scale = 1.0 / static_cast<double>(s_count);
  std::vector<double> cur(s_count, m.horizon());
  std::vector<char> taken(m.candidates(), 0);
  for (std::size_t c : start) {
    taken[c] = 1;
    for (std::size_t s = 0; s < s_count; ++s) cur[s] = std::min(cur[s], m.at(s, c));
  }
  auto gain = [&](std::size_t c) {
    double g = 0.0;
    for (std::size_t s = 0; s < s_count; ++s) {
      const double d = cur[s] - m.at(s, c);
      if (d > 0.0) g += d;
    }
    return g;
  };
  struct Entry {
    double bound;
    std::size_t index;
    std::size_t round;
  };
  auto worse = [](const Entry& a, const Entry& b) {
    if (a.bound != b.bound) return a.bound < b.bound;
    return a.index > b.index;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> heap(worse);
  for (std::size_t c = 0; c < m.candidates(); ++c) {
    if (!taken[c]) heap.push({gain(c), c, start.size()});
  }
  Greedy out;
  out.chosen = std::move(start);
  const std::size_t target = std::min(k, m.candidates());
  while (out.chosen.size() < target && !heap.empty()) {
    Entry top = heap.top();
    heap.pop();
    if (top.round != out.chosen.size()) {
      top.bound = gain(top.index);
      top.round = out.chosen.size();
      heap.push(top);
      continue;
    }
    out.chosen.push_back(top.index);
    for (std::size_t s = 0; s < s_count; ++s) cur[s] = std::min(cur[s], m.at(s, top.index));
    double sum = 0.0;
    for (double v : cur) sum += v;
    out.values.push_back(sum * scale);
  }
  return out;
}

// Best-improvement 1-swap local search over a placed set. For every placed
// sensor the best replacement is found from per-scenario best and
// second-best times; a swap is applied when it lowers the objective.
// Returns the refined expected minutes.
double SwapRefine(const ArrivalMatrix& m, std::vector<std::size_t>& chosen) {
  const std::size_t s_count = m.scenarios();
  const double scale = 1.0 / static_cast<double>(s_count);
  const std::size_t none = m.candidates();
  std::vector<double> b1(s_count), b2(s_count);
  std::vector<std::size_t> arg(s_count);
  std::vector<char> taken(m.candidates(), 0);
  for (std::size_t c : chosen) taken[c] = 1;

  auto rebuild = [&] {
    double sum = 0.0;
    for (std::size_t s = 0; s < s_count; ++s) {
      b1[s] = b2[s] = m.horizon();
      arg[s] = none;
      for (std::size_t c : chosen) {
        const double v = m.at(s, c);
        if (v < b1[s]) {
          b2[s] = b1[s];
          b1[s] = v;
          arg[s] = c;
        } else if (v < b2[s]) {
          b2[s] = v;
        }
      }
      sum += b1[s];
    }
    return sum;
  };

  double total = rebuild();
  if (chosen.empty() || chosen.size() == m.candidates()) return total * scale;
  constexpr int kMaxPasses = 50;
  for (int pass = 0; pass < kMaxPasses; ++pass) {
    bool improved = false;
    for (std::size_t& out : chosen) {
      double removal = 0.0;  // total with `out` removed
      for (std::size_t s = 0; s < s_count; ++s) removal += arg[s] == out ? b2[s] : b1[s];
      double best_total = total;
      std::size_t best_in = none;
      for (std::size_t c = 0; c < m.candidates(); ++c) {
        if (taken[c]) continue;
        double t = 0.0;
        for (std::size_t s = 0; s < s_count; ++s) {
          const double without = arg[s] == out ? b2[s] : b1[s];
          t += std::min(without, m.at(s, c));
        }
        if (t < best_total - 1e-12 * std::max(1.0, removal)) {
          best_total = t;
          best_in = c;
        }
      }
      if (best_in == none) continue;
      taken[out] = 0;
      taken[best_in] = 1;
      out = best_in;
      total = rebuild();
      improved = true;
    }
    if (!improved) break;
  }
  return total * scale;
}

// Greedy plus swap refinement, restarted from the best few single
// sensors (forced as the first pick); keeps the lowest objective, earliest
// restart on ties.
constexpr std::size_t kRestarts = 8;

double Heuristic(const ArrivalMatrix& m, const std::vector<std::size_t>& start, std::size_t k,
                 std::vector<std::size_t>& chosen) {
  Greedy g = GreedyExtend(m, start, k);
  chosen = g.chosen;
  double best = SwapRefine(m, chosen);
  if (!start.empty() || k <= 1) return best;

  std::vector<std::pair<double, std::size_t>> singles;
  for (std::size_t c = 0; c < m.candidates(); ++c) singles.push_back({m.Expected({c}), c});
  std::sort(singles.begin(), singles.end());
  const std::size_t tries = std::min(kRestarts, singles.size());
  for (std::size_t i = 1; i < tries; ++i) {
    Greedy r = GreedyExtend(m, {singles[i].second}, k);
    const double v = SwapRefine(m, r.chosen);
    if (v < best) {
      best = v;
      chosen = r.chosen;
    }
  }
  return best;
}

ExpectedTimePlacement Exhaustive(const ArrivalMatrix& m, std::size_t k) {
  const std::size_t n = m.candidates();
  const std::size_t r = std::min(k, n);
  std::vector<std::size_t> idx(r);
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<std::size_t> best = idx;
  double best_sum = m.Expected(idx);
  while (true) {
    std::size_t i = r;
    while (i > 0 && idx[i - 1] == n - r + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < r; ++j) idx[j] = idx[j - 1] + 1;
    const double v = m.Expected(idx);
    if (v < best_sum) {
      best_sum = v;
      best = idx;
    }
  }
  ExpectedTimePlacement out;
  for (std::size_t c : best) out.nodes.push_back(m.ids()[c]);
  out.expected_minutes = best_sum;
  out.exact = true;
  return out;
}

bool UseExhaustive(const ArrivalMatrix& m, std::size_t k, SearchMode mode) {
  if (mode == SearchMode::kExhaustive) return true;
  if (mode == SearchMode::kGreedy) return false;
  return m.candidates() <= 20 && k <= 5;
}

}  // namespace

ExpectedTimePlacement PlaceExpectedTime(const ArrivalMatrix& m, std::size_t k, SearchMode mode) {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "sensor count must be positive");
  if (UseExhaustive(m, k, mode)) return Exhaustive(m, k);
  std::vector<std::size_t> chosen;
  ExpectedTimePlacement out;
  out.expected_minutes = Heuristic(m, {}, k, chosen);
  for (std::size_t c : chosen) out.nodes.push_back(m.ids()[c]);
  out.exact = chosen.size() == m.candidates();
  return out;
}

ExpectedTimePlacement PlaceExpectedTime(const Network& net,
                                        const std::vector<TransportResult>& scenarios,
                                        const std::vector<std::string>& candidates, std::size_t k,
                                        SearchMode mode) {
  return PlaceExpectedTime(ArrivalMatrix(net, scenarios, candidates), k, mode);
}

std::vector<ParetoPoint> ParetoSweep(const ArrivalMatrix& m, const std::vector<std::size_t>& k_values) {
  for (std::size_t i = 0; i < k_values.size(); ++i) {
    if (k_values[i] == 0 || (i > 0 && k_values[i] <= k_values[i - 1])) {
      throw Error(ErrorCode::kInvalidArgument, "Pareto k values must be positive and ascending");
    }
  }
  std::map<std::string, std::size_t> index;
  for (std::size_t c = 0; c < m.ids().size(); ++c) index[m.ids()[c]] = c;

  std::vector<ParetoPoint> out;
  std::vector<std::size_t> prev;
  double prev_value = m.horizon();
  for (std::size_t k : k_values) {
    const std::size_t r = std::min(k, m.candidates());
    std::vector<std::size_t> chosen;
    double value;
    if (UseExhaustive(m, k, SearchMode::kAuto)) {
      ExpectedTimePlacement e = Exhaustive(m, k);
      for (const auto& id : e.nodes) chosen.push_back(index.at(id));
      value = e.expected_minutes;
    } else {
      value = Heuristic(m, {}, r, chosen);
    }
    if (!prev.empty() && (value > prev_value || chosen.size() < r)) {
      std::vector<std::size_t> ext;
      const double ext_value = Heuristic(m, prev, r, ext);
      if (ext_value < value) {
        chosen = ext;
        value = ext_value;
      }
    }
    ParetoPoint p;
    p.k = k;
    p.expected_minutes = value;
    for (std::size_t c : chosen) p.nodes.push_back(m.ids()[c]);
    out.push_back(std::move(p));
    prev = std::move(chosen);
    prev_value = value;
  }
  return out;
}

std::vector<ParetoPoint> ParetoSweep(const Network& net,
                                     const std::vector<TransportResult>& scenarios,
                                     const std::vector<std::string>& candidates,
                                     const std::vector<std::size_t>& k_values) {
  return ParetoSweep(ArrivalMatrix(net, scenarios, candidates), k_values);
}

Consensus ComputeConsensus(const std::vector<std::vector<std::string>>& selections) {
  Consensus c;
  for (const auto& list : selections) {
    for (const auto& id : list) {
      ++c.counts[id];
      ++c.total;
    }
  }
  for (const auto& [id, n] : c.counts) {
    c.shares[id] = static_cast<double>(n) / static_cast<double>(c.total);
  }
  return c;
}

}  // namespace dbp
