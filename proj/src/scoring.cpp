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

#include "dbp/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dbp/error.hpp"
#include "dbp/strings.hpp"

namespace dbp {

ConcentrationTable::ConcentrationTable(std::vector<std::string> node_ids,
                                       std::vector<std::string> family_names,
                                       std::size_t timestamp_count)
    : nodes(std::move(node_ids)),
      families(std::move(family_names)),
      timestamps(timestamp_count),
      values(nodes.size() * timestamps * families.size(), 0.0) {}

EventCounts DetectEvents(const ConcentrationTable& table,
                         const std::map<std::string, double>& thresholds) {
  std::vector<double> limit(table.families.size());
  for (std::size_t f = 0; f < table.families.size(); ++f) {
    auto it = thresholds.find(table.families[f]);
    if (it == thresholds.end() || !(it->second > 0.0)) {
      throw Error(ErrorCode::kConfigError, "no positive threshold for family " + table.families[f]);
    }
    limit[f] = it->second;
  }
  EventCounts ev;
  ev.nodes = table.nodes;
  ev.families = table.families;
  ev.counts.assign(table.nodes.size() * table.families.size(), 0);
  for (std::size_t n = 0; n < table.nodes.size(); ++n) {
    for (std::size_t t = 0; t < table.timestamps; ++t) {
      for (std::size_t f = 0; f < table.families.size(); ++f) {
        if (table.at(n, t, f) > limit[f]) ++ev.counts[n * table.families.size() + f];
      }
    }
  }
  return ev;
}

double RoundHalfAway2(double x) {
  const double y = std::abs(x) * 100.0;
  const double whole = std::floor(y);
  const double frac = y - whole;
  const double r = frac >= 0.5 - 1e-9 ? whole + 1.0 : whole;
  return std::copysign(r / 100.0, x);
}

std::vector<NodeScore> ScoreNodes(const EventCounts& events, std::size_t timestamp_count,
                                  const std::map<std::string, double>& weights,
                                  const std::map<std::string, double>& detection_minutes,
                                  const std::map<std::string, double>& contracts) {
  if (timestamp_count == 0) throw Error(ErrorCode::kInvalidArgument, "scoring needs at least one timestamp");
  const std::size_t f_count = events.families.size();
  const double per_family = f_count ? 100.0 / static_cast<double>(f_count) : 0.0;
  std::vector<NodeScore> out;
  out.reserve(events.nodes.size());
  double max_total = 0.0;
  for (std::size_t n = 0; n < events.nodes.size(); ++n) {
    NodeScore s;
    s.node = events.nodes[n];
    double sum = 0.0;
    for (std::size_t f = 0; f < f_count; ++f) {
      const std::string& fam = events.families[f];
      auto w = weights.find(fam);
      if (w == weights.end() || w->second < 0.0 || w->second > 5.0) {
        throw Error(ErrorCode::kConfigError, "weight for " + fam + " missing or outside [0, 5]");
      }
      const std::size_t c = events.count(n, f);
      const double pct =
          RoundHalfAway2(static_cast<double>(c) / static_cast<double>(timestamp_count) * per_family);
      const double weighted = RoundHalfAway2(pct * w->second);
      s.events[fam] = c;
      s.normalized_percent[fam] = pct;
      s.weighted[fam] = weighted;
      sum += weighted;
    }
    s.total = RoundHalfAway2(sum);
    auto dt = detection_minutes.find(s.node);
    s.detection_time = dt == detection_minutes.end() ? std::numeric_limits<double>::infinity() : dt->second;
    auto ct = contracts.find(s.node);
    s.contracts = ct == contracts.end() ? 0.0 : ct->second;
    max_total = std::max(max_total, s.total);
    out.push_back(std::move(s));
  }
  for (auto& s : out) s.relative = max_total > 0.0 ? s.total / max_total : 0.0;
  return out;
}

std::vector<NodeScore> FilterCandidates(const std::vector<NodeScore>& scores, double cutoff) {
  if (!(cutoff >= 0.0 && cutoff <= 1.0)) {
    throw Error(ErrorCode::kConfigError, "candidate cutoff must lie in [0, 1]");
  }
  std::vector<NodeScore> out;
  for (const auto& s : scores) {
    if (s.relative >= cutoff) out.push_back(s);
  }
  if (out.empty()) {
    throw Error(ErrorCode::kEmptyCandidateSet,
                "no node reaches relative score " + FormatDouble(cutoff));
  }
  std::stable_sort(out.begin(), out.end(), [](const NodeScore& a, const NodeScore& b) {
    if (a.relative != b.relative) return a.relative > b.relative;
    return a.node < b.node;
  });
  return out;
}

std::string ScoresCsv(const std::vector<NodeScore>& scores) {
  std::vector<std::string> fams;
  if (!scores.empty()) {
    for (const auto& [f, c] : scores.front().events) fams.push_back(f);
  }
  std::ostringstream out;
  out << "node";
  for (const auto& f : fams) out << "," << f << "_events";
  for (const auto& f : fams) out << "," << f << "_percent";
  for (const auto& f : fams) out << "," << f << "_weighted";
  out << ",total,relative,detection_time,contracts\n";
  for (const auto& s : scores) {
    out << s.node;
    for (const auto& f : fams) out << "," << s.events.at(f);
    for (const auto& f : fams) out << "," << FormatFixed2(s.normalized_percent.at(f));
    for (const auto& f : fams) out << "," << FormatFixed2(s.weighted.at(f));
    out << "," << FormatFixed2(s.total) << "," << FormatDouble(s.relative) << ",";
    if (std::isfinite(s.detection_time)) out << FormatDouble(s.detection_time);
    out << "," << FormatDouble(s.contracts) << "\n";
  }
  return out.str();
}

}  // namespace dbp
