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

#include <algorithm>
#include <map>

#include "dbp/env_data.hpp"
#include "dbp/error.hpp"
#include "dbp/random.hpp"
#include "dbp/strings.hpp"

namespace dbp {

namespace {

using Key = std::pair<std::int64_t, std::string>;

Key KeyOf(Timestamp t, const std::string& node) { return {t.time_since_epoch().count(), node}; }

}  // namespace

EnvDataset SynthesizeRanges(const EnvDataset& observed, const Network& net,
                            const SynthesisOptions& options, SynthesisReport* report) {
  SynthesisReport local;
  SynthesisReport& rep = report ? *report : local;
  rep = SynthesisReport{};

  if (options.chlorine_by_node.size() != net.nodes.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "chlorine_by_node must hold one transport concentration per network node");
  }
  if (options.interval_seconds <= 0 || options.horizon_seconds < options.interval_seconds) {
    throw Error(ErrorCode::kInvalidArgument, "synthesis needs 0 < interval <= horizon");
  }
  for (const auto& r : observed.records) {
    if (!net.FindNode(r.node)) {
      throw Error(ErrorCode::kUnknownNode, "environmental record references unknown node '" + r.node + "'");
    }
  }

  std::vector<std::string> params(std::begin(kCoreParameters), std::end(kCoreParameters));
  for (const auto& e : observed.ExtraNames()) params.push_back(e);
  for (const auto& [name, range] : options.default_ranges) {
    if (std::find(params.begin(), params.end(), name) == params.end()) params.push_back(name);
  }

  std::map<std::string, ParameterRange> ranges;
  for (const std::string& p : params) {
    bool any = false;
    ParameterRange r;
    for (const auto& rec : observed.records) {
      auto v = RecordValue(rec, p);
      if (!v) continue;
      if (!any) {
        r = {*v, *v};
        any = true;
      } else {
        r.lo = std::min(r.lo, *v);
        r.hi = std::max(r.hi, *v);
      }
    }
    if (!any) {
      auto it = options.default_ranges.find(p);
      if (it == options.default_ranges.end()) {
        throw Error(ErrorCode::kNoObservations,
                    "no observations and no default range for parameter '" + p + "'");
      }
      r = it->second;
      if (r.hi < r.lo) throw Error(ErrorCode::kInvalidArgument, "default range for '" + p + "' is inverted");
    }
    ranges[p] = r;
  }

  Timestamp start{};
  if (options.start) {
    start = *options.start;
  } else {
    const auto ts = observed.Timestamps();
    if (ts.empty()) throw Error(ErrorCode::kInvalidArgument, "synthesis without observations needs a start time");
    start = ts.front();
  }
  const std::int64_t steps = options.horizon_seconds / options.interval_seconds;

  std::map<Key, const EnvRecord*> by_key;
  std::map<std::string, double> observed_contracts;
  for (const auto& r : observed.records) {
    by_key[KeyOf(r.timestamp, r.node)] = &r;
    observed_contracts.emplace(r.node, r.contracts);
  }
  auto contracts_for = [&](const std::string& node) {
    if (auto it = options.contracts.find(node); it != options.contracts.end()) return it->second;
    if (auto it = observed_contracts.find(node); it != observed_contracts.end()) return it->second;
    return 0.0;
  };

  Rng rng(options.seed);
  EnvDataset out;
  out.records.reserve(static_cast<std::size_t>(steps) * net.nodes.size());
  for (std::int64_t s = 0; s < steps; ++s) {
    const Timestamp t = start + std::chrono::seconds(s * options.interval_seconds);

    // Spatial estimates for this timestamp, per parameter and node index.
    std::map<std::string, std::vector<std::optional<double>>> kriged;
    if (options.method == GapFill::kKriging) {
      for (const std::string& p : params) {
        std::vector<KrigingSample> samples;
        std::vector<double> values;
        for (std::size_t i = 0; i < net.nodes.size(); ++i) {
          auto it = by_key.find(KeyOf(t, net.nodes[i].id));
          if (it == by_key.end() || !net.nodes[i].coord) continue;
          auto v = RecordValue(*it->second, p);
          if (!v) continue;
          samples.push_back({*net.nodes[i].coord, *v});
          values.push_back(*v);
        }
        if (samples.size() < 2) continue;
        std::vector<Coord> targets;
        std::vector<std::size_t> target_nodes;
        for (std::size_t i = 0; i < net.nodes.size(); ++i) {
          if (net.nodes[i].coord && !by_key.count(KeyOf(t, net.nodes[i].id))) {
            targets.push_back(*net.nodes[i].coord);
            target_nodes.push_back(i);
          }
        }
        const Variogram v = options.variogram.value_or(DefaultVariogram(values, net));
        std::vector<KrigingEstimate> est;
        try {
          est = Krige(samples, targets, v);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kSingularSystem) throw;
          rep.warnings.push_back("kriging of '" + p + "' at " + FormatTimestamp(t) +
                                 " fell back to ranges: " + e.what());
          continue;
        }
        auto& slot = kriged[p];
        slot.assign(net.nodes.size(), std::nullopt);
        const ParameterRange& range = ranges[p];
        for (std::size_t j = 0; j < est.size(); ++j) {
          if (est[j].negative_weights) {
            ++rep.screened_targets;
            // Screened estimates outside the observed range are not clamped;
            // they fall back to a range draw.
            if (est[j].value < range.lo || est[j].value > range.hi) continue;
          }
          slot[target_nodes[j]] = est[j].value;
        }
      }
    }

    for (std::size_t i = 0; i < net.nodes.size(); ++i) {
      const Node& node = net.nodes[i];
      if (auto it = by_key.find(KeyOf(t, node.id)); it != by_key.end()) {
        out.records.push_back(*it->second);
        continue;
      }
      EnvRecord r;
      r.timestamp = t;
      r.node = node.id;
      r.contracts = contracts_for(node.id);
      r.chlorine = options.chlorine_by_node[i];
      for (const std::string& p : params) {
        const ParameterRange& range = ranges[p];
        std::optional<double> value;
        if (auto k = kriged.find(p); k != kriged.end()) value = k->second[i];
        if (value) {
          ++rep.kriged_values;
        } else {
          value = rng.Uniform(range.lo, range.hi);
          ++rep.range_values;
        }
        SetRecordValue(r, p, *value);
      }
      ++rep.synthesized_records;
      out.records.push_back(std::move(r));
    }
  }
  if (rep.screened_targets) {
    rep.warnings.push_back(std::to_string(rep.screened_targets) +
                           " kriging targets had negative weights (screening effect)");
  }
  return out;
}

}  // namespace dbp
