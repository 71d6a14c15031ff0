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

#include "dbp/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <set>
#include <sstream>
#include <thread>

#include "dbp/dbp_models.hpp"
#include "dbp/error.hpp"
#include "dbp/log.hpp"
#include "dbp/random.hpp"
#include "dbp/strings.hpp"
#include "dbp/synthetic.hpp"

namespace dbp {

using nlohmann::json;

namespace {

[[noreturn]] void ConfigFail(const std::string& what) { throw Error(ErrorCode::kConfigError, what); }

json Num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

template <class T>
T Get(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    ConfigFail(std::string("config key '") + key + "': " + e.what());
  }
}

void CheckKeys(const json& j, const char* where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) ConfigFail(std::string(where) + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) ConfigFail(std::string("unknown key '") + key + "' in " + where);
  }
}

std::string_view InjectionModeName(InjectionConfig::Mode m) {
  switch (m) {
    case InjectionConfig::Mode::kSources: return "sources";
    case InjectionConfig::Mode::kFixed: return "fixed";
    case InjectionConfig::Mode::kRandomized: return "randomized";
  }
  return "";
}

std::vector<std::size_t> DefaultKValues(std::size_t k) {
  std::vector<std::size_t> out{1, 5, 10, 20, 40, 60, 80, 100};
  out.push_back(k);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

RunConfig ConfigFromJson(const json& j) {
  CheckKeys(j, "config",
            {"network_path", "env_data_path", "contracts_path", "models", "threshold_mode",
             "thresholds", "weights", "objectives", "sensor_count", "cutoff", "injection",
             "horizon_hours", "interval_minutes", "start", "seed", "gap_fill", "variogram",
             "completeness", "initial_chlorine", "bulk_coeff", "reaction_order", "detection_limit",
             "transport_horizon_minutes", "reaction_time_hours", "sohn_haa9_ph_exponent", "pareto"});
  RunConfig c;
  auto opt = [&](const char* key, auto& field) {
    if (j.contains(key)) field = Get<std::decay_t<decltype(field)>>(j, key);
  };
  auto opt_nullable = [&](const char* key, std::optional<double>& field) {
    if (!j.contains(key)) return;
    if (j.at(key).is_null()) {
      field.reset();
    } else {
      field = Get<double>(j, key);
    }
  };
  opt("network_path", c.network_path);
  opt("env_data_path", c.env_data_path);
  opt("contracts_path", c.contracts_path);
  opt("models", c.models);
  opt("threshold_mode", c.threshold_mode);
  opt("thresholds", c.thresholds);
  opt("weights", c.weights);
  if (j.contains("objectives")) {
    c.objectives.clear();
    for (const auto& name : Get<std::vector<std::string>>(j, "objectives")) {
      auto k = ObjectiveFromName(name);
      if (!k) ConfigFail("unknown objective '" + name + "'");
      c.objectives.push_back(*k);
    }
  }
  if (j.contains("sensor_count")) {
    const auto& v = j.at("sensor_count");
    if (!v.is_number_integer() || v.get<long long>() < 0) ConfigFail("sensor_count must be a non-negative integer");
    c.sensor_count = v.get<std::size_t>();
  }
  opt("cutoff", c.cutoff);
  if (j.contains("injection")) {
    const json& in = j.at("injection");
    CheckKeys(in, "injection", {"mode", "nodes", "count", "seed"});
    const std::string mode = Get<std::string>(in, "mode");
    if (mode == "sources") {
      c.injection.mode = InjectionConfig::Mode::kSources;
    } else if (mode == "fixed") {
      c.injection.mode = InjectionConfig::Mode::kFixed;
    } else if (mode == "randomized") {
      c.injection.mode = InjectionConfig::Mode::kRandomized;
    } else {
      ConfigFail("unknown injection mode '" + mode + "'");
    }
    if (in.contains("nodes")) c.injection.nodes = Get<std::vector<std::string>>(in, "nodes");
    if (in.contains("count")) c.injection.count = Get<std::size_t>(in, "count");
    if (in.contains("seed")) c.injection.seed = Get<std::uint64_t>(in, "seed");
  }
  opt("horizon_hours", c.horizon_hours);
  opt("interval_minutes", c.interval_minutes);
  opt("start", c.start);
  opt("seed", c.seed);
  if (j.contains("gap_fill")) {
    const std::string g = Get<std::string>(j, "gap_fill");
    if (g == "ranges") {
      c.gap_fill = GapFill::kRanges;
    } else if (g == "kriging") {
      c.gap_fill = GapFill::kKriging;
    } else {
      ConfigFail("gap_fill must be 'ranges' or 'kriging'");
    }
  }
  if (j.contains("variogram") && !j.at("variogram").is_null()) {
    const json& v = j.at("variogram");
    CheckKeys(v, "variogram", {"nugget", "sill", "range"});
    Variogram vg;
    vg.nugget = Get<double>(v, "nugget");
    vg.sill = Get<double>(v, "sill");
    vg.range = Get<double>(v, "range");
    c.variogram = vg;
  }
  if (j.contains("completeness")) {
    const json& v = j.at("completeness");
    CheckKeys(v, "completeness", {"min_node_coverage", "max_interval_seconds"});
    if (v.contains("min_node_coverage")) c.completeness.min_node_coverage = Get<double>(v, "min_node_coverage");
    if (v.contains("max_interval_seconds")) {
      c.completeness.max_interval_seconds = Get<std::int64_t>(v, "max_interval_seconds");
    }
  }
  opt("initial_chlorine", c.initial_chlorine);
  opt_nullable("bulk_coeff", c.bulk_coeff);
  opt_nullable("reaction_order", c.reaction_order);
  opt("detection_limit", c.detection_limit);
  opt("transport_horizon_minutes", c.transport_horizon_minutes);
  opt_nullable("reaction_time_hours", c.reaction_time_hours);
  opt("sohn_haa9_ph_exponent", c.sohn_haa9_ph_exponent);
  if (j.contains("pareto")) {
    const json& p = j.at("pareto");
    CheckKeys(p, "pareto", {"scenarios", "seed", "k_values"});
    if (p.contains("scenarios")) c.pareto.scenarios = Get<std::size_t>(p, "scenarios");
    if (p.contains("seed")) c.pareto.seed = Get<std::uint64_t>(p, "seed");
    if (p.contains("k_values")) c.pareto.k_values = Get<std::vector<std::size_t>>(p, "k_values");
  }
  ValidateConfig(c);
  return c;
}

json ConfigToJson(const RunConfig& c) {
  json j;
  j["network_path"] = c.network_path;
  j["env_data_path"] = c.env_data_path;
  j["contracts_path"] = c.contracts_path;
  j["models"] = c.models;
  j["threshold_mode"] = c.threshold_mode;
  j["thresholds"] = c.thresholds;
  j["weights"] = c.weights;
  j["objectives"] = json::array();
  for (ObjectiveKind k : c.objectives) j["objectives"].push_back(std::string(ObjectiveName(k)));
  j["sensor_count"] = c.sensor_count;
  j["cutoff"] = c.cutoff;
  json in;
  in["mode"] = std::string(InjectionModeName(c.injection.mode));
  in["nodes"] = c.injection.nodes;
  in["count"] = c.injection.count;
  in["seed"] = c.injection.seed;
  j["injection"] = in;
  j["horizon_hours"] = c.horizon_hours;
  j["interval_minutes"] = c.interval_minutes;
  j["start"] = c.start;
  j["seed"] = c.seed;
  j["gap_fill"] = c.gap_fill == GapFill::kKriging ? "kriging" : "ranges";
  if (c.variogram) {
    j["variogram"] = {{"nugget", c.variogram->nugget}, {"sill", c.variogram->sill}, {"range", c.variogram->range}};
  } else {
    j["variogram"] = nullptr;
  }
  j["completeness"] = {{"min_node_coverage", c.completeness.min_node_coverage},
                       {"max_interval_seconds", c.completeness.max_interval_seconds}};
  j["initial_chlorine"] = c.initial_chlorine;
  j["bulk_coeff"] = c.bulk_coeff ? json(*c.bulk_coeff) : json(nullptr);
  j["reaction_order"] = c.reaction_order ? json(*c.reaction_order) : json(nullptr);
  j["detection_limit"] = c.detection_limit;
  j["transport_horizon_minutes"] = c.transport_horizon_minutes;
  j["reaction_time_hours"] = c.reaction_time_hours ? json(*c.reaction_time_hours) : json(nullptr);
  j["sohn_haa9_ph_exponent"] = c.sohn_haa9_ph_exponent;
  j["pareto"] = {{"scenarios", c.pareto.scenarios}, {"seed", c.pareto.seed}, {"k_values", c.pareto.k_values}};
  return j;
}

void ValidateConfig(const RunConfig& c) {
  const bool has_time = std::count(c.objectives.begin(), c.objectives.end(), ObjectiveKind::kTimeOfDetection) > 0;
  const bool has_score = std::count(c.objectives.begin(), c.objectives.end(), ObjectiveKind::kNormalizedScore) > 0;
  if (!has_time && !has_score) {
    ConfigFail("objectives must include time_of_detection or normalized_score");
  }
  std::set<ObjectiveKind> seen(c.objectives.begin(), c.objectives.end());
  if (seen.size() != c.objectives.size()) ConfigFail("objectives must not repeat");
  if (c.sensor_count < 1) ConfigFail("sensor_count must be at least 1");
  if (!(c.cutoff >= 0.0 && c.cutoff <= 1.0)) ConfigFail("cutoff must lie in [0, 1]");
  if (c.models.empty()) ConfigFail("at least one DBP family model is required");
  if (c.threshold_mode != "EU" && c.threshold_mode != "US") ConfigFail("threshold_mode must be EU or US");
  for (const auto& [family, spec] : c.models) {
    try {
      DbpModel::FromSpec(spec, c.sohn_haa9_ph_exponent);
    } catch (const FormulaSyntaxError& e) {
      ConfigFail("model for " + family + " at offset " + std::to_string(e.offset()) + ": " + e.what());
    }
    auto t = c.thresholds.find(family);
    const std::optional<double> threshold =
        t != c.thresholds.end() ? std::optional<double>(t->second) : DefaultThreshold(family, c.threshold_mode);
    if (!threshold) ConfigFail("no threshold for family " + family);
    auto w = c.weights.find(family);
    ValidateFamily({family, *threshold, w == c.weights.end() ? 1.0 : w->second});
  }
  for (const auto& [family, v] : c.thresholds) {
    if (!c.models.count(family)) ConfigFail("threshold for unknown family " + family);
  }
  for (const auto& [family, v] : c.weights) {
    if (!c.models.count(family)) ConfigFail("weight for unknown family " + family);
  }
  if (seen.count(ObjectiveKind::kThmEvents) && !c.models.count("THM")) {
    ConfigFail("thm_events needs a THM model");
  }
  if (seen.count(ObjectiveKind::kHaaEvents) && !c.models.count("HAA")) {
    ConfigFail("haa_events needs a HAA model");
  }
  if (c.injection.mode == InjectionConfig::Mode::kFixed && c.injection.nodes.empty()) {
    ConfigFail("fixed injection needs at least one node");
  }
  if (c.injection.mode == InjectionConfig::Mode::kRandomized && c.injection.count < 1) {
    ConfigFail("randomized injection count must be at least 1");
  }
  if (!(c.interval_minutes > 0.0) || !(c.horizon_hours * 60.0 >= c.interval_minutes)) {
    ConfigFail("need 0 < interval_minutes <= horizon_hours * 60");
  }
  if (!ParseTimestamp(c.start)) ConfigFail("start is not a timestamp: " + c.start);
  if (!(c.completeness.min_node_coverage >= 0.0 && c.completeness.min_node_coverage <= 1.0) ||
      c.completeness.max_interval_seconds <= 0) {
    ConfigFail("completeness thresholds out of range");
  }
  if (!(c.initial_chlorine > 0.0)) ConfigFail("initial_chlorine must be positive");
  if (c.bulk_coeff && !(*c.bulk_coeff >= 0.0)) ConfigFail("bulk_coeff must be >= 0");
  if (c.reaction_order && !(*c.reaction_order >= 0.0)) ConfigFail("reaction_order must be >= 0");
  if (!(c.detection_limit >= 0.0)) ConfigFail("detection_limit must be >= 0");
  if (!(c.transport_horizon_minutes > 0.0)) ConfigFail("transport_horizon_minutes must be positive");
  if (c.reaction_time_hours && !(*c.reaction_time_hours >= 0.0)) ConfigFail("reaction_time_hours must be >= 0");
  if (c.pareto.scenarios < 1) ConfigFail("pareto.scenarios must be at least 1");
  for (std::size_t i = 0; i < c.pareto.k_values.size(); ++i) {
    if (c.pareto.k_values[i] == 0 || (i && c.pareto.k_values[i] <= c.pareto.k_values[i - 1])) {
      ConfigFail("pareto.k_values must be positive and ascending");
    }
  }
}

namespace {

std::string ReadFile(const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, std::string("cannot read ") + what + " '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

using Clock = std::chrono::steady_clock;

class Stages {
 public:
  explicit Stages(RunResult& r) : r_(r) {}

  template <class F>
  void operator()(const char* stage, F&& f) {
    const auto t0 = Clock::now();
    try {
      f();
    } catch (const Error& e) {
      throw Error(e.code(), std::string(stage) + ": " + e.what());
    }
    const double s = std::chrono::duration<double>(Clock::now() - t0).count();
    r_.timing.push_back({stage, s});
    Log(LogLevel::kInfo, std::string(stage) + " " + FormatDouble(s) + " s");
  }

 private:
  RunResult& r_;
};

std::vector<TransportResult> RunScenarios(const Network& net, const FlowSolution& flows,
                                          const DecayParams& decay, const TransportOptions& topts,
                                          const ParetoConfig& cfg) {
  Rng seeds(cfg.seed);
  std::vector<std::uint64_t> scenario_seeds(cfg.scenarios);
  for (auto& s : scenario_seeds) s = seeds.Next();
  std::vector<TransportResult> out(cfg.scenarios);
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), cfg.scenarios));
  std::vector<std::future<void>> jobs;
  for (std::size_t w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t s = w; s < cfg.scenarios; s += workers) {
        out[s] = Propagate(net, flows, RandomizeInjection(net, 1, scenario_seeds[s]), decay, topts);
      }
    }));
  }
  for (auto& j : jobs) j.get();
  return out;
}

}  // namespace

std::vector<std::string> ResolveInjection(const RunConfig& c, const Network& net) {
  std::vector<std::string> out;
  switch (c.injection.mode) {
    case InjectionConfig::Mode::kSources:
      for (const Node& n : net.nodes) {
        if (n.fixed_head()) out.push_back(n.id);
      }
      break;
    case InjectionConfig::Mode::kFixed:
      out = c.injection.nodes;
      break;
    case InjectionConfig::Mode::kRandomized:
      out = RandomizeInjection(net, c.injection.count, c.injection.seed);
      break;
  }
  return out;
}

DecayParams ResolveDecay(const RunConfig& c, const Network& net) {
  return {c.initial_chlorine, c.bulk_coeff.value_or(net.bulk_coeff), c.reaction_order.value_or(net.reaction_order)};
}

TransportOptions ResolveTransport(const RunConfig& c) {
  TransportOptions t;
  t.detection_limit = c.detection_limit;
  t.horizon_minutes = c.transport_horizon_minutes;
  return t;
}

SynthesisOptions ResolveSynthesis(const RunConfig& c, const TransportResult& transport,
                                  const std::map<std::string, double>& contracts) {
  SynthesisOptions so;
  so.horizon_seconds = static_cast<std::int64_t>(std::llround(c.horizon_hours * 3600.0));
  so.interval_seconds = static_cast<std::int64_t>(std::llround(c.interval_minutes * 60.0));
  so.seed = c.seed;
  so.start = ParseTimestamp(c.start);
  so.method = c.gap_fill;
  so.variogram = c.variogram;
  so.default_ranges = BaselineRanges();
  so.chlorine_by_node = transport.chlorine;
  so.contracts = contracts;
  return so;
}

PreparedNetwork PrepareNetwork(const RunConfig& c, const std::string& inp_text) {
  PreparedNetwork p;
  p.net = ParseInp(inp_text);
  p.flows = SolveFlows(p.net);
  p.injection = ResolveInjection(c, p.net);
  p.transport = Propagate(p.net, p.flows, p.injection, ResolveDecay(c, p.net), ResolveTransport(c));
  p.reaction_hours = ReactionHours(p.transport, c.reaction_time_hours);
  return p;
}

EnvDataset BaselineDataset(const RunConfig& c, const PreparedNetwork& p) {
  return SynthesizeRanges(EnvDataset{}, p.net, ResolveSynthesis(c, p.transport, {}));
}

std::vector<FamilyTarget> ResolveTargets(const RunConfig& c) {
  std::vector<FamilyTarget> out;
  for (const auto& [family, spec] : c.models) {
    auto t = c.thresholds.find(family);
    const std::optional<double> threshold =
        t != c.thresholds.end() ? std::optional<double>(t->second) : DefaultThreshold(family, c.threshold_mode);
    if (!threshold) ConfigFail("no threshold for family " + family);
    out.push_back({family, DbpModel::FromSpec(spec, c.sohn_haa9_ph_exponent), *threshold});
  }
  return out;
}

RunInputs LoadInputs(const RunConfig& c) {
  RunInputs in;
  if (c.network_path.empty()) throw Error(ErrorCode::kConfigError, "network_path is required");
  in.inp_text = ReadFile(c.network_path, "network file");
  if (!c.env_data_path.empty()) in.env_text = ReadFile(c.env_data_path, "environmental data");
  if (!c.contracts_path.empty()) in.contracts_text = ReadFile(c.contracts_path, "contracts file");
  return in;
}

std::vector<double> ReactionHours(const TransportResult& t, std::optional<double> fixed_hours) {
  std::vector<double> out(t.water_age_minutes.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (fixed_hours) {
      out[i] = *fixed_hours;
    } else {
      out[i] = std::min(t.water_age_minutes[i], t.horizon_minutes) / 60.0;
    }
  }
  return out;
}

ContaminationResult ContaminateScenario(const RunConfig& c, const PreparedNetwork& p,
                                        const EnvDataset& base, double fraction,
                                        const std::set<std::string>& families, std::uint64_t seed) {
  ContaminationOptions opts;
  opts.fraction = fraction;
  opts.seed = seed;
  for (std::size_t i = 0; i < p.net.nodes.size(); ++i) {
    opts.reaction_hours[p.net.nodes[i].id] = p.reaction_hours[i];
  }
  std::set<std::string> wanted = families;
  for (auto& t : ResolveTargets(c)) {
    if (wanted.erase(t.family)) opts.targets.push_back(std::move(t));
  }
  if (!wanted.empty()) {
    throw Error(ErrorCode::kConfigError, "no model configured for family " + *wanted.begin());
  }
  return Contaminate(base, p.net, opts);
}

RunResult RunPipeline(const RunConfig& config, const RunInputs& inputs) {
  const auto start = Clock::now();
  ValidateConfig(config);
  RunResult r;
  r.config = config;
  Stages stage(r);
  const Network* net = nullptr;

  stage("parse", [&] {
    r.network = ParseInp(inputs.inp_text);
    net = &r.network;
  });
  stage("validate", [&] {
    r.diagnostics = ValidateNetwork(*net);
    for (const auto& d : r.diagnostics) r.warnings.push_back(d.message);
  });
  stage("hydraulics", [&] {
    r.flows = SolveFlows(*net);
    for (const auto& id : r.flows.isolated) {
      r.warnings.push_back("junction " + id + " is isolated and excluded from the hydraulic solve");
    }
  });

  const DecayParams decay = ResolveDecay(config, *net);
  const TransportOptions topts = ResolveTransport(config);
  TransportResult transport;
  stage("transport", [&] {
    r.injection = ResolveInjection(config, *net);
    transport = Propagate(*net, r.flows, r.injection, decay, topts);
  });

  EnvDataset dataset;
  std::map<std::string, double> contracts;
  stage("environment", [&] {
    std::optional<EnvDataset> observed;
    if (inputs.env_text) observed = ParseEnvCsv(*inputs.env_text);
    if (inputs.contracts_text) {
      contracts = ParseContractsCsv(*inputs.contracts_text);
      for (const auto& [id, v] : contracts) {
        if (!net->FindNode(id)) throw Error(ErrorCode::kUnknownNode, "contracts reference unknown node '" + id + "'");
      }
    }
    r.contracts_available = inputs.contracts_text.has_value() || inputs.env_text.has_value();

    SynthesisOptions so = ResolveSynthesis(config, transport, contracts);
    bool synthesize = true;
    if (observed) {
      r.completeness = AssessCompleteness(*observed, *net, config.completeness);
      synthesize = r.completeness->incomplete;
      if (!synthesize) dataset = *observed;
    }
    if (synthesize) {
      if (observed) so.start.reset();
      SynthesisReport rep;
      dataset = SynthesizeRanges(observed.value_or(EnvDataset{}), *net, so, &rep);
      for (const auto& w : rep.warnings) r.warnings.push_back(w);
      r.synthesis = std::move(rep);
    }
    if (!inputs.contracts_text) {
      for (const auto& rec : dataset.records) contracts.emplace(rec.node, rec.contracts);
    }
  });

  ConcentrationTable table;
  stage("models", [&] {
    std::vector<std::pair<std::string, DbpModel>> models;
    for (const auto& [family, spec] : config.models) {
      models.emplace_back(family, DbpModel::FromSpec(spec, config.sohn_haa9_ph_exponent));
      r.families.push_back(family);
      r.model_descriptions[family] = models.back().second.Describe();
      auto t = config.thresholds.find(family);
      r.thresholds[family] = t != config.thresholds.end() ? t->second : *DefaultThreshold(family, config.threshold_mode);
      auto w = config.weights.find(family);
      r.weights[family] = w != config.weights.end() ? w->second : 1.0;
    }
    const std::vector<Timestamp> stamps = dataset.Timestamps();
    r.timestamp_count = stamps.size();
    // Sensors go on junctions; sources are monitored at the plant.
    std::vector<std::string> ids;
    std::vector<std::ptrdiff_t> row(net->nodes.size(), -1);
    for (std::size_t i = 0; i < net->nodes.size(); ++i) {
      if (net->nodes[i].kind != NodeKind::kJunction) continue;
      row[i] = static_cast<std::ptrdiff_t>(ids.size());
      ids.push_back(net->nodes[i].id);
    }
    table = ConcentrationTable(ids, r.families, stamps.size());
    const std::vector<double> hours = ReactionHours(transport, config.reaction_time_hours);
    for (const EnvRecord& rec : dataset.records) {
      auto node = net->FindNode(rec.node);
      if (!node) throw Error(ErrorCode::kUnknownNode, "environmental record references unknown node '" + rec.node + "'");
      const std::size_t t = static_cast<std::size_t>(
          std::lower_bound(stamps.begin(), stamps.end(), rec.timestamp) - stamps.begin());
      // No residual chlorine, no formation.
      if (row[*node] < 0 || rec.chlorine < config.detection_limit) continue;
      for (std::size_t f = 0; f < models.size(); ++f) {
        table.at(static_cast<std::size_t>(row[*node]), t, f) = models[f].second.Evaluate(rec, hours[*node]);
      }
    }
  });

  std::vector<NodeScore> candidates;
  stage("scoring", [&] {
    if (r.timestamp_count == 0) throw Error(ErrorCode::kNoObservations, "no timestamps to score");
    const EventCounts events = DetectEvents(table, r.thresholds);
    std::map<std::string, double> detection;
    for (std::size_t i = 0; i < net->nodes.size(); ++i) {
      detection[net->nodes[i].id] = transport.arrival_minutes[i];
    }
    r.scores = ScoreNodes(events, r.timestamp_count, r.weights, detection, contracts);
    try {
      candidates = FilterCandidates(r.scores, config.cutoff);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kEmptyCandidateSet) throw;
      r.warnings.push_back(std::string(e.what()) + "; every node is a candidate");
      candidates = FilterCandidates(r.scores, 0.0);
    }
    for (const auto& c : candidates) r.candidates.push_back(c.node);
  });

  stage("objectives", [&] {
    std::vector<std::future<std::vector<PlacedNode>>> jobs;
    for (ObjectiveKind k : config.objectives) {
      jobs.push_back(std::async(std::launch::async, [&, k] {
        return PlaceSeparable(candidates, k, config.sensor_count, r.contracts_available);
      }));
    }
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      r.per_objective.emplace_back(config.objectives[i], jobs[i].get());
    }
    std::vector<std::vector<std::string>> lists;
    for (const auto& [k, placed] : r.per_objective) {
      std::vector<std::string> ids;
      for (const auto& p : placed) ids.push_back(p.node);
      lists.push_back(std::move(ids));
    }
    r.consensus = ComputeConsensus(lists);
    if (r.candidates.size() < config.sensor_count) {
      r.warnings.push_back("only " + std::to_string(r.candidates.size()) + " candidates for " +
                           std::to_string(config.sensor_count) + " sensors");
    }
  });

  stage("pareto", [&] {
    const std::vector<TransportResult> scenarios = RunScenarios(*net, r.flows, decay, topts, config.pareto);
    std::vector<std::string> all;
    for (const Node& n : net->nodes) {
      if (n.kind == NodeKind::kJunction) all.push_back(n.id);
    }
    std::vector<std::size_t> ks = config.pareto.k_values.empty() ? DefaultKValues(config.sensor_count)
                                                                 : config.pareto.k_values;
    ks.erase(std::remove_if(ks.begin(), ks.end(), [&](std::size_t k) { return k > all.size(); }), ks.end());
    if (ks.empty()) ks.push_back(all.size());
    r.pareto = ParetoSweep(ArrivalMatrix(*net, scenarios, all), ks);
  });

  stage("serialization", [&] {
    const std::string doc = ResultToJson(r, false).dump(2);
    const std::string csv = ScoresCsv(r.scores);
    Log(LogLevel::kDebug, "result " + std::to_string(doc.size()) + " bytes, scores " +
                              std::to_string(csv.size()) + " bytes");
  });
  r.total_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return r;
}

RunResult Run(const RunConfig& config) {
  ValidateConfig(config);
  return RunPipeline(config, LoadInputs(config));
}

namespace {

json ScoreJson(const NodeScore& s) {
  return {{"node", s.node},
          {"events", s.events},
          {"normalized_percent", s.normalized_percent},
          {"weighted", s.weighted},
          {"total", s.total},
          {"relative", s.relative},
          {"detection_time", Num(s.detection_time)},
          {"contracts", s.contracts}};
}

}  // namespace

json ResultToJson(const RunResult& r, bool include_timing) {
  json j;
  j["config"] = ConfigToJson(r.config);
  const Network& net = r.network;
  json diag = json::array();
  for (const auto& d : r.diagnostics) {
    diag.push_back({{"kind", std::string(DiagnosticKindName(d.kind))}, {"subject", d.subject}, {"message", d.message}});
  }
  json unsupported = json::array();
  for (const auto& u : net.unsupported_elements) unsupported.push_back({{"section", u.section}, {"id", u.id}});
  j["network"] = {{"title", net.title},
                  {"nodes", net.nodes.size()},
                  {"junctions", net.JunctionCount()},
                  {"pipes", net.pipes.size()},
                  {"unsupported_elements", unsupported},
                  {"bulk_coeff_per_hour", net.bulk_coeff},
                  {"reaction_order", net.reaction_order},
                  {"diagnostics", diag}};
  j["hydraulics"] = {{"iterations", r.flows.iterations},
                     {"residual_lps", r.flows.residual},
                     {"total_demand_lps", r.flows.total_demand},
                     {"isolated", r.flows.isolated}};
  j["injection"] = r.injection;
  if (r.completeness) {
    const auto& c = *r.completeness;
    j["completeness"] = {{"node_count", c.node_count},
                         {"nodes_covered", c.nodes_covered},
                         {"timestamp_count", c.timestamp_count},
                         {"record_count", c.record_count},
                         {"node_coverage", c.node_coverage},
                         {"interval_seconds", c.interval_seconds ? json(*c.interval_seconds) : json(nullptr)},
                         {"fully_populated", c.fully_populated},
                         {"incomplete", c.incomplete},
                         {"reasons", c.reasons}};
  } else {
    j["completeness"] = nullptr;
  }
  if (r.synthesis) {
    const auto& s = *r.synthesis;
    j["synthesis"] = {{"synthesized_records", s.synthesized_records},
                      {"kriged_values", s.kriged_values},
                      {"range_values", s.range_values},
                      {"screened_targets", s.screened_targets}};
  } else {
    j["synthesis"] = nullptr;
  }
  j["timestamps"] = r.timestamp_count;
  json fams = json::array();
  for (const auto& f : r.families) {
    fams.push_back({{"name", f},
                    {"model", r.model_descriptions.at(f)},
                    {"threshold", r.thresholds.at(f)},
                    {"weight", r.weights.at(f)}});
  }
  j["families"] = fams;
  j["contracts_available"] = r.contracts_available;
  json scores = json::array();
  for (const auto& s : r.scores) scores.push_back(ScoreJson(s));
  j["scores"] = scores;
  j["candidates"] = r.candidates;
  json per = json::object();
  for (const auto& [k, placed] : r.per_objective) {
    json list = json::array();
    for (const auto& p : placed) list.push_back({{"node", p.node}, {"metric", Num(p.metric)}});
    per[std::string(ObjectiveName(k))] = list;
  }
  json points = json::array();
  for (const auto& p : r.pareto) {
    points.push_back({{"k", p.k},
                      {"expected_minutes", p.expected_minutes},
                      {"expected_hours", p.expected_minutes / 60.0},
                      {"nodes", p.nodes}});
  }
  j["placement"] = {{"per_objective", per},
                    {"pareto", {{"scenario_count", r.config.pareto.scenarios},
                                {"seed", r.config.pareto.seed},
                                {"undetected_minutes", r.config.transport_horizon_minutes},
                                {"points", points}}},
                    {"consensus", {{"counts", r.consensus.counts},
                                   {"shares", r.consensus.shares},
                                   {"total", r.consensus.total}}}};
  j["warnings"] = r.warnings;
  if (include_timing) {
    json stages = json::array();
    for (const auto& t : r.timing) stages.push_back({{"stage", t.stage}, {"seconds", t.seconds}});
    j["timing"] = {{"stages", stages}, {"total_seconds", r.total_seconds}};
  }
  return j;
}

json NetworkGeometryJson(const Network& net) {
  json nodes = json::array();
  for (const Node& n : net.nodes) {
    json node = {{"id", n.id}, {"kind", std::string(NodeKindName(n.kind))}, {"elevation", n.elevation},
                 {"demand", n.base_demand}};
    node["x"] = n.coord ? json(n.coord->x) : json(nullptr);
    node["y"] = n.coord ? json(n.coord->y) : json(nullptr);
    nodes.push_back(node);
  }
  json links = json::array();
  for (const Pipe& p : net.pipes) {
    links.push_back({{"id", p.id}, {"from", p.from}, {"to", p.to}, {"kind", "pipe"},
                     {"length", p.length}, {"diameter", p.diameter},
                     {"status", p.status == LinkStatus::kClosed ? "closed" : "open"}});
  }
  for (const auto& u : net.unsupported_elements) {
    links.push_back({{"id", u.id}, {"from", u.from}, {"to", u.to},
                     {"kind", u.section == "PUMPS" ? "pump" : "valve"}});
  }
  return {{"nodes", nodes}, {"links", links}};
}

void WriteRunDirectory(const RunResult& r, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (fs::exists(dir, ec) && !fs::is_empty(dir, ec)) {
    throw Error(ErrorCode::kIo, "run directory '" + dir.string() + "' is not empty");
  }
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create '" + dir.string() + "': " + ec.message());
  auto write = [&](const char* name, const std::string& text) {
    std::ofstream out(dir / name, std::ios::binary);
    out << text;
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + (dir / name).string());
  };
  write("config.json", ConfigToJson(r.config).dump(2) + "\n");
  write("result.json", ResultToJson(r).dump(2) + "\n");
  write("scores.csv", ScoresCsv(r.scores));
  write("network.json", NetworkGeometryJson(r.network).dump(2) + "\n");
}

}  // namespace dbp
