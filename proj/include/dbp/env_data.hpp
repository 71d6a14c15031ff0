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

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dbp/network.hpp"

namespace dbp {

using Timestamp = std::chrono::sys_seconds;

// Accepts "DD-MM-YY H:MM" (two-digit years are 20YY) and ISO-8601
// "YYYY-MM-DD[T ]HH:MM[:SS][Z]".
std::optional<Timestamp> ParseTimestamp(std::string_view s);
// ISO-8601 "YYYY-MM-DDTHH:MM:SS".
std::string FormatTimestamp(Timestamp t);

// One measured or synthesized row of environmental data.
struct EnvRecord {
  Timestamp timestamp{};
  std::string node;
  double contracts = 0.0;
  double chlorine = 0.0;     // mg/L
  double temperature = 0.0;  // deg C
  double ph = 7.0;
  double toc = 0.0;  // mg/L
  double don = 0.0;  // mg/L
  double br = 0.0;   // mg/L
  std::map<std::string, double> extras;

  bool operator==(const EnvRecord&) const = default;
};

// Names under which record fields are exposed to formulas and to range
// synthesis. Aliases (Cl2, Temp, Br) follow the usual regression notation.
inline constexpr const char* kCoreParameters[] = {"Temperature", "pH", "TOC", "DON", "BR"};

std::optional<double> RecordValue(const EnvRecord& r, std::string_view name);
void SetRecordValue(EnvRecord& r, std::string_view name, double value);

struct EnvDataset {
  std::vector<EnvRecord> records;

  std::vector<Timestamp> Timestamps() const;  // ascending, distinct
  std::set<std::string> NodesCovered() const;
  // Largest gap between consecutive timestamps; nullopt with < 2 timestamps.
  std::optional<std::int64_t> IntervalSeconds() const;
  // Extra-variable names present in any record, sorted.
  std::vector<std::string> ExtraNames() const;
};

// Exact Table 2 header, in order.
inline constexpr const char* kEnvColumns[] = {
    "Timestamp", "Node", "Contracts", "Chlorine (mg/L)", "Temperature",
    "pH",        "TOC (mg/L)", "DON (mg/L)", "BR (mg/L)"};

EnvDataset ParseEnvCsv(std::string_view text);
std::string WriteEnvCsv(const EnvDataset& ds);
// Example file offered to operators.
std::string EnvTemplateCsv();

// node id -> contracts. Header "Node,Contracts" is optional.
std::map<std::string, double> ParseContractsCsv(std::string_view text);
std::string WriteContractsCsv(const std::map<std::string, double>& contracts);
std::string ContractsTemplateCsv();

struct CompletenessThresholds {
  double min_node_coverage = 0.30;
  std::int64_t max_interval_seconds = 3600;

  bool operator==(const CompletenessThresholds&) const = default;
};

struct CompletenessReport {
  std::size_t node_count = 0;
  std::size_t nodes_covered = 0;
  std::size_t timestamp_count = 0;
  std::size_t record_count = 0;
  double node_coverage = 0.0;
  std::optional<std::int64_t> interval_seconds;
  bool fully_populated = false;  // records == timestamps x nodes
  bool incomplete = false;       // synthesis trigger
  std::vector<std::string> reasons;
};

CompletenessReport AssessCompleteness(const EnvDataset& ds, const Network& net,
                                      const CompletenessThresholds& thresholds = {});

struct ParameterRange {
  double lo = 0.0;
  double hi = 0.0;
};

struct Variogram {
  double nugget = 0.0;
  double sill = 1.0;
  double range = 1.0;

  // Exponential model: nugget + (sill - nugget) * (1 - exp(-h / range)), 0 at h = 0.
  double operator()(double h) const;
  bool operator==(const Variogram&) const = default;
};

struct KrigingSample {
  Coord at;
  double value = 0.0;
};

struct KrigingEstimate {
  double value = 0.0;
  std::vector<double> weights;  // one per sample, summing to 1
  bool negative_weights = false;  // screening effect; value is not clamped
};

// Ordinary kriging. Throws kSingularSystem for duplicate sample locations
// and kInvalidArgument for fewer than two samples.
std::vector<KrigingEstimate> Krige(const std::vector<KrigingSample>& samples,
                                   const std::vector<Coord>& targets, const Variogram& v);

// Exponential, nugget 0, sill = sample variance, range = bbox diagonal / 3.
Variogram DefaultVariogram(const std::vector<double>& values, const Network& net);

enum class GapFill { kRanges, kKriging };

struct SynthesisOptions {
  std::int64_t horizon_seconds = 7 * 24 * 3600;
  std::int64_t interval_seconds = 3600;
  std::uint64_t seed = 0;
  std::optional<Timestamp> start;  // default: earliest observation
  GapFill method = GapFill::kRanges;
  std::optional<Variogram> variogram;  // kriging; default per DefaultVariogram
  std::map<std::string, ParameterRange> default_ranges;
  // Chlorine per node (indexed like Network::nodes), from transport.
  std::vector<double> chlorine_by_node;
  std::map<std::string, double> contracts;  // overrides observed contracts
};

struct SynthesisReport {
  std::size_t synthesized_records = 0;
  std::size_t kriged_values = 0;
  std::size_t range_values = 0;
  std::size_t screened_targets = 0;  // kriging estimates with negative weights
  std::vector<std::string> warnings;
};

// Builds a complete grid (every node x every timestamp). Observations on the
// grid are kept; everything else is filled per `options.method`.
EnvDataset SynthesizeRanges(const EnvDataset& observed, const Network& net,
                            const SynthesisOptions& options, SynthesisReport* report = nullptr);

// Round half away from zero (used for scenario node counts).
std::size_t RoundHalfAwayCount(double x);

}  // namespace dbp
