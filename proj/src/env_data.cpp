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

#include "dbp/env_data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "dbp/error.hpp"
#include "dbp/strings.hpp"

namespace dbp {

namespace {

// Howard Hinnant's days-from-civil.
std::int64_t DaysFromCivil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void CivilFromDays(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp < 10 ? mp + 3 : mp - 9;
  y += m <= 2;
}

bool ValidDate(std::int64_t y, int m, int d) {
  static const int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (m < 1 || m > 12 || d < 1) return false;
  const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
  return d <= kDays[m - 1] + (m == 2 && leap);
}

std::optional<Timestamp> MakeTimestamp(std::int64_t y, int mo, int d, int h, int mi, int s) {
  if (!ValidDate(y, mo, d) || h < 0 || h > 23 || mi < 0 || mi > 59 || s < 0 || s > 59) {
    return std::nullopt;
  }
  const std::int64_t days = DaysFromCivil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d));
  return Timestamp(std::chrono::seconds(days * 86400 + h * 3600 + mi * 60 + s));
}

}  // namespace

std::optional<Timestamp> ParseTimestamp(std::string_view raw) {
  const std::string s(Trim(raw));
  int a = 0, b = 0, c = 0, h = 0, mi = 0, sec = 0;
  char sep = 0;
  int consumed = 0;
  // ISO-8601: YYYY-MM-DD[T ]HH:MM[:SS][Z]
  if (std::sscanf(s.c_str(), "%4d-%2d-%2d%c%2d:%2d%n", &a, &b, &c, &sep, &h, &mi, &consumed) == 6 &&
      (sep == 'T' || sep == ' ') && s.size() >= 10 && s[4] == '-') {
    std::string rest = s.substr(static_cast<std::size_t>(consumed));
    if (!rest.empty() && rest[0] == ':') {
      int n2 = 0;
      if (std::sscanf(rest.c_str(), ":%2d%n", &sec, &n2) != 1) return std::nullopt;
      rest = rest.substr(static_cast<std::size_t>(n2));
    }
    if (!rest.empty() && rest != "Z") return std::nullopt;
    return MakeTimestamp(a, b, c, h, mi, sec);
  }
  // Date only (ISO).
  consumed = 0;
  if (std::sscanf(s.c_str(), "%4d-%2d-%2d%n", &a, &b, &c, &consumed) == 3 &&
      static_cast<std::size_t>(consumed) == s.size() && s[4] == '-') {
    return MakeTimestamp(a, b, c, 0, 0, 0);
  }
  // DD-MM-YY H:MM
  consumed = 0;
  if (std::sscanf(s.c_str(), "%2d-%2d-%2d %2d:%2d%n", &a, &b, &c, &h, &mi, &consumed) == 5 &&
      static_cast<std::size_t>(consumed) == s.size()) {
    return MakeTimestamp(2000 + c, b, a, h, mi, 0);
  }
  return std::nullopt;
}

std::string FormatTimestamp(Timestamp t) {
  const std::int64_t secs = t.time_since_epoch().count();
  std::int64_t days = secs >= 0 ? secs / 86400 : (secs - 86399) / 86400;
  const std::int64_t rem = secs - days * 86400;
  std::int64_t y;
  unsigned m, d;
  CivilFromDays(days, y, m, d);
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02lld:%02lld:%02lld",
                static_cast<long long>(y), m, d, static_cast<long long>(rem / 3600),
                static_cast<long long>((rem / 60) % 60), static_cast<long long>(rem % 60));
  return buf;
}

std::optional<double> RecordValue(const EnvRecord& r, std::string_view name) {
  if (name == "Contracts") return r.contracts;
  if (name == "Chlorine" || name == "Cl2") return r.chlorine;
  if (name == "Temperature" || name == "Temp") return r.temperature;
  if (name == "pH") return r.ph;
  if (name == "TOC") return r.toc;
  if (name == "DON") return r.don;
  if (name == "BR" || name == "Br") return r.br;
  auto it = r.extras.find(std::string(name));
  if (it == r.extras.end()) return std::nullopt;
  return it->second;
}

void SetRecordValue(EnvRecord& r, std::string_view name, double value) {
  if (name == "Contracts") {
    r.contracts = value;
  } else if (name == "Chlorine" || name == "Cl2") {
    r.chlorine = value;
  } else if (name == "Temperature" || name == "Temp") {
    r.temperature = value;
  } else if (name == "pH") {
    r.ph = value;
  } else if (name == "TOC") {
    r.toc = value;
  } else if (name == "DON") {
    r.don = value;
  } else if (name == "BR" || name == "Br") {
    r.br = value;
  } else {
    r.extras[std::string(name)] = value;
  }
}

std::vector<Timestamp> EnvDataset::Timestamps() const {
  std::vector<Timestamp> ts;
  ts.reserve(records.size());
  for (const auto& r : records) ts.push_back(r.timestamp);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  return ts;
}

std::set<std::string> EnvDataset::NodesCovered() const {
  std::set<std::string> out;
  for (const auto& r : records) out.insert(r.node);
  return out;
}

std::optional<std::int64_t> EnvDataset::IntervalSeconds() const {
  const auto ts = Timestamps();
  if (ts.size() < 2) return std::nullopt;
  std::int64_t gap = 0;
  for (std::size_t i = 1; i < ts.size(); ++i) {
    gap = std::max<std::int64_t>(gap, (ts[i] - ts[i - 1]).count());
  }
  return gap;
}

std::vector<std::string> EnvDataset::ExtraNames() const {
  std::set<std::string> names;
  for (const auto& r : records) {
    for (const auto& [k, v] : r.extras) names.insert(k);
  }
  return {names.begin(), names.end()};
}

namespace {

void CheckRecord(const EnvRecord& r, std::size_t line) {
  if (r.ph < 0.0 || r.ph > 14.0) {
    throw ParseError(ErrorCode::kMalformedRow, line, "pH outside [0, 14]");
  }
  for (double v : {r.contracts, r.chlorine, r.toc, r.don, r.br}) {
    if (v < 0.0) throw ParseError(ErrorCode::kMalformedRow, line, "negative concentration or contracts");
  }
}

}  // namespace

EnvDataset ParseEnvCsv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!Trim(line).empty()) {
      header = SplitCsvLine(line);
      break;
    }
  }
  constexpr std::size_t kCore = std::size(kEnvColumns);
  if (header.size() < kCore) {
    throw ParseError(ErrorCode::kMalformedRow, line_no, "environmental header has too few columns");
  }
  if (!header.empty() && header[0].rfind("\xEF\xBB\xBF", 0) == 0) header[0].erase(0, 3);
  for (std::size_t i = 0; i < kCore; ++i) {
    if (header[i] != kEnvColumns[i]) {
      throw ParseError(ErrorCode::kMalformedRow, line_no,
                       "expected column '" + std::string(kEnvColumns[i]) + "', found '" + header[i] + "'");
    }
  }
  EnvDataset ds;
  std::set<std::pair<std::int64_t, std::string>> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const auto f = SplitCsvLine(line);
    if (f.size() != header.size()) {
      throw ParseError(ErrorCode::kMalformedRow, line_no,
                       "row has " + std::to_string(f.size()) + " fields, header has " +
                           std::to_string(header.size()));
    }
    EnvRecord r;
    auto ts = ParseTimestamp(f[0]);
    if (!ts) throw ParseError(ErrorCode::kMalformedRow, line_no, "bad timestamp '" + f[0] + "'");
    r.timestamp = *ts;
    r.node = f[1];
    if (r.node.empty()) throw ParseError(ErrorCode::kMalformedRow, line_no, "empty node id");
    double* targets[] = {&r.contracts, &r.chlorine, &r.temperature, &r.ph, &r.toc, &r.don, &r.br};
    for (std::size_t i = 2; i < kCore; ++i) {
      auto v = ParseDouble(f[i]);
      if (!v) throw ParseError(ErrorCode::kMalformedRow, line_no, "non-numeric '" + header[i] + "'");
      *targets[i - 2] = *v;
    }
    for (std::size_t i = kCore; i < f.size(); ++i) {
      if (Trim(f[i]).empty()) continue;
      auto v = ParseDouble(f[i]);
      if (!v) throw ParseError(ErrorCode::kMalformedRow, line_no, "non-numeric '" + header[i] + "'");
      r.extras[header[i]] = *v;
    }
    CheckRecord(r, line_no);
    if (!seen.insert({r.timestamp.time_since_epoch().count(), r.node}).second) {
      throw ParseError(ErrorCode::kMalformedRow, line_no, "duplicate (timestamp, node) for '" + r.node + "'");
    }
    ds.records.push_back(std::move(r));
  }
  return ds;
}

std::string WriteEnvCsv(const EnvDataset& ds) {
  const auto extras = ds.ExtraNames();
  std::ostringstream out;
  for (std::size_t i = 0; i < std::size(kEnvColumns); ++i) out << (i ? "," : "") << kEnvColumns[i];
  for (const auto& e : extras) out << "," << e;
  out << "\n";
  for (const auto& r : ds.records) {
    out << FormatTimestamp(r.timestamp) << "," << r.node << "," << FormatDouble(r.contracts) << ","
        << FormatDouble(r.chlorine) << "," << FormatDouble(r.temperature) << ","
        << FormatDouble(r.ph) << "," << FormatDouble(r.toc) << "," << FormatDouble(r.don) << ","
        << FormatDouble(r.br);
    for (const auto& e : extras) {
      out << ",";
      auto it = r.extras.find(e);
      if (it != r.extras.end()) out << FormatDouble(it->second);
    }
    out << "\n";
  }
  return out.str();
}

std::string EnvTemplateCsv() {
  std::string out;
  for (std::size_t i = 0; i < std::size(kEnvColumns); ++i) {
    out += (i ? "," : "");
    out += kEnvColumns[i];
  }
  out += "\n";
  out +=
      "20-10-24 0:00,1_1000,0,1.41,19.03,8.3,0.14,4.26,3.62\n"
      "20-10-24 0:00,1_1001,5,0.72,13.05,7.4,5.77,12.86,4.36\n"
      "20-10-24 0:00,1_1002,0,0.32,14.25,6.7,9.57,10.53,2.82\n"
      "20-10-24 0:00,1_1003,12.5,1.47,12.12,8.2,9.87,10.49,4.81\n"
      "20-10-24 0:00,1_1004,0,0.29,20.95,6.7,12.13,10.57,3.08\n"
      "20-10-24 0:00,1_1005,2.5,1.36,15.62,7,1.06,12.43,4.88\n"
      "20-10-24 0:00,1_1006,0,0.49,12.85,8.3,5.22,6.38,4.9\n"
      "20-10-24 0:00,1_1007,5,0.93,23.09,7.1,0.46,2.04,4.47\n"
      "20-10-24 0:00,1_1009,0,0.86,23.91,7.9,8.74,8.65,4.61\n"
      "20-10-24 0:00,1_1010,0,0.8,21.67,7.1,10.38,13.8,2.87\n";
  return out;
}

std::map<std::string, double> ParseContractsCsv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  std::map<std::string, double> out;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    auto f = SplitCsvLine(line);
    if (first && !f.empty() && f[0].rfind("\xEF\xBB\xBF", 0) == 0) f[0].erase(0, 3);
    if (f.size() != 2) {
      throw ParseError(ErrorCode::kMalformedRow, line_no, "contracts rows need exactly 2 fields");
    }
    auto v = ParseDouble(f[1]);
    if (first && !v) {  // header
      first = false;
      continue;
    }
    first = false;
    if (!v || *v < 0.0) {
      throw ParseError(ErrorCode::kMalformedRow, line_no, "contracts must be a non-negative number");
    }
    if (!out.emplace(f[0], *v).second) {
      throw ParseError(ErrorCode::kMalformedRow, line_no, "duplicate node '" + f[0] + "'");
    }
  }
  return out;
}

std::string WriteContractsCsv(const std::map<std::string, double>& contracts) {
  std::string out = "Node,Contracts\n";
  for (const auto& [node, c] : contracts) out += node + "," + FormatDouble(c) + "\n";
  return out;
}

std::string ContractsTemplateCsv() {
  return "Node,Contracts\n1_1000,0\n1_1001,5\n1_1002,0\n1_1003,12.5\n1_1005,2.5\n1_1007,5\n";
}

CompletenessReport AssessCompleteness(const EnvDataset& ds, const Network& net,
                                      const CompletenessThresholds& thresholds) {
  CompletenessReport rep;
  for (const auto& r : ds.records) {
    if (!net.FindNode(r.node)) {
      throw Error(ErrorCode::kUnknownNode, "environmental record references unknown node '" + r.node + "'");
    }
  }
  rep.node_count = net.nodes.size();
  rep.nodes_covered = ds.NodesCovered().size();
  rep.timestamp_count = ds.Timestamps().size();
  rep.record_count = ds.records.size();
  rep.node_coverage =
      rep.node_count ? static_cast<double>(rep.nodes_covered) / static_cast<double>(rep.node_count) : 0.0;
  rep.interval_seconds = ds.IntervalSeconds();
  rep.fully_populated = rep.record_count == rep.timestamp_count * rep.node_count && rep.record_count > 0;
  if (rep.node_coverage < thresholds.min_node_coverage) {
    rep.incomplete = true;
    rep.reasons.push_back("node coverage " + FormatDouble(rep.node_coverage) + " below " +
                          FormatDouble(thresholds.min_node_coverage));
  }
  if (!rep.interval_seconds) {
    rep.incomplete = true;
    rep.reasons.push_back("fewer than two distinct timestamps");
  } else if (*rep.interval_seconds > thresholds.max_interval_seconds) {
    rep.incomplete = true;
    rep.reasons.push_back("measurement interval " + std::to_string(*rep.interval_seconds) +
                          " s exceeds " + std::to_string(thresholds.max_interval_seconds) + " s");
  }
  return rep;
}

std::size_t RoundHalfAwayCount(double x) {
  return static_cast<std::size_t>(std::llround(x));  // llround rounds halves away from zero
}

}  // namespace dbp
