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

// dbpfinder: DBP sensor placement from the command line.

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "dbp/env_data.hpp"
#include "dbp/error.hpp"
#include "dbp/log.hpp"
#include "dbp/pipeline.hpp"
#include "dbp/scenario.hpp"
#include "dbp/service.hpp"
#include "dbp/strings.hpp"
#include "dbp/synthetic.hpp"
#include "json.hpp"

namespace {

using nlohmann::json;

std::string ReadText(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw dbp::Error(dbp::ErrorCode::kIo, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteText(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw dbp::Error(dbp::ErrorCode::kIo, "cannot write '" + path + "'");
}

dbp::Service* g_service = nullptr;

void OnSignal(int) {
  if (g_service) g_service->Stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DBP sensor placement engine"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Run the full placement pipeline");
  std::string config_path, network, env, contracts, out_dir;
  std::vector<std::string> objectives;
  std::size_t k = 0;
  std::uint64_t seed = 0;
  double cutoff = -1.0;
  run->add_option("--config", config_path, "RunConfig JSON file");
  run->add_option("--network", network, "EPANET .inp file");
  run->add_option("--env", env, "Environmental data CSV");
  run->add_option("--contracts", contracts, "Contracts CSV");
  run->add_option("--objectives", objectives, "Objectives")->delimiter(',');
  auto* k_opt = run->add_option("--k", k, "Sensors per objective");
  auto* seed_opt = run->add_option("--seed", seed, "Random seed");
  auto* cutoff_opt = run->add_option("--cutoff", cutoff, "Relative score cutoff");
  run->add_option("--out", out_dir, "Run directory")->required();

  // serve
  auto* serve = app.add_subcommand("serve", "Serve the HTTP API");
  std::string bind = "127.0.0.1:8080", runs_dir = "runs";
  serve->add_option("--bind", bind, "HOST:PORT");
  serve->add_option("--runs", runs_dir, "Run storage directory");

  // scenario
  auto* scenario = app.add_subcommand("scenario", "Contaminate a dataset centre-outward");
  std::string sc_network, sc_env, sc_out = "-", sc_config, sc_nodes_out;
  std::vector<std::string> families{"thm"};
  double fraction = 0.2;
  std::uint64_t sc_seed = 1;
  scenario->add_option("--network", sc_network, "EPANET .inp file")->required();
  scenario->add_option("--env", sc_env, "Base environmental CSV (default: synthetic baseline)");
  scenario->add_option("--config", sc_config, "RunConfig JSON for models and thresholds");
  scenario->add_option("--fraction", fraction, "Share of junctions to contaminate")->check(CLI::Range(0.0, 1.0));
  scenario->add_option("--families", families, "thm, haa or both")->delimiter(',');
  scenario->add_option("--seed", sc_seed, "Seed for contamination margins");
  scenario->add_option("--out", sc_out, "Output CSV ('-' for stdout)");
  scenario->add_option("--nodes-out", sc_nodes_out, "Write contaminated node ids here");

  // generate
  auto* generate = app.add_subcommand("generate", "Write a bundled synthetic network");
  std::string kind = "tree", gen_out = "-", gen_contracts;
  std::size_t size = 0;
  std::uint64_t gen_seed = 2024;
  generate->add_option("--kind", kind, "tree, grid or demo")->check(CLI::IsMember({"tree", "grid", "demo"}));
  generate->add_option("--size", size, "Junctions (tree) or rows*cols/40 rows (grid)");
  generate->add_option("--seed", gen_seed, "Generator seed");
  generate->add_option("--out", gen_out, "Output .inp ('-' for stdout)");
  generate->add_option("--contracts", gen_contracts, "Also write a contracts CSV");

  // template
  auto* tmpl = app.add_subcommand("template", "Print an example input file");
  std::string which;
  tmpl->add_option("which", which, "env or contracts")->required()->check(CLI::IsMember({"env", "contracts"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      dbp::RunConfig config;
      if (!config_path.empty()) config = dbp::ConfigFromJson(json::parse(ReadText(config_path)));
      if (!network.empty()) config.network_path = network;
      if (!env.empty()) config.env_data_path = env;
      if (!contracts.empty()) config.contracts_path = contracts;
      if (!objectives.empty()) {
        config.objectives.clear();
        for (const auto& o : objectives) {
          auto kind_of = dbp::ObjectiveFromName(o);
          if (!kind_of) throw dbp::Error(dbp::ErrorCode::kConfigError, "unknown objective '" + o + "'");
          config.objectives.push_back(*kind_of);
        }
      }
      if (*k_opt) config.sensor_count = k;
      if (*seed_opt) config.seed = seed;
      if (*cutoff_opt) config.cutoff = cutoff;
      const dbp::RunResult r = dbp::Run(config);
      dbp::WriteRunDirectory(r, out_dir);
      for (const auto& w : r.warnings) dbp::Log(dbp::LogLevel::kWarn, w);
      for (const auto& [obj, placed] : r.per_objective) {
        std::cout << dbp::ObjectiveName(obj) << ":";
        for (const auto& p : placed) std::cout << " " << p.node;
        std::cout << "\n";
      }
      for (const auto& t : r.timing) std::cout << "  " << t.stage << " " << dbp::FormatDouble(t.seconds) << " s\n";
      std::cout << "total " << dbp::FormatDouble(r.total_seconds) << " s; results in " << out_dir << "\n";
      return 0;
    }
    if (*serve) {
      const auto colon = bind.rfind(':');
      if (colon == std::string::npos) throw dbp::Error(dbp::ErrorCode::kInvalidArgument, "--bind needs HOST:PORT");
      const std::string host = bind.substr(0, colon);
      const int port = std::stoi(bind.substr(colon + 1));
      dbp::Service service(runs_dir);
      const int bound = service.Bind(host, port);
      if (bound < 0) throw dbp::Error(dbp::ErrorCode::kIo, "cannot bind " + bind);
      g_service = &service;
      std::signal(SIGINT, OnSignal);
      std::signal(SIGTERM, OnSignal);
      std::cout << "listening on " << host << ":" << bound << std::endl;
      service.Listen();
      g_service = nullptr;
      return 0;
    }
    if (*scenario) {
      dbp::RunConfig config;
      if (!sc_config.empty()) config = dbp::ConfigFromJson(json::parse(ReadText(sc_config)));
      const dbp::PreparedNetwork prepared = dbp::PrepareNetwork(config, ReadText(sc_network));
      const dbp::EnvDataset base =
          sc_env.empty() ? dbp::BaselineDataset(config, prepared) : dbp::ParseEnvCsv(ReadText(sc_env));
      std::set<std::string> wanted;
      for (const auto& f : families) {
        const std::string up = dbp::ToUpper(f);
        if (up == "BOTH") {
          wanted.insert("THM");
          wanted.insert("HAA");
        } else {
          wanted.insert(up);
        }
      }
      const dbp::ContaminationResult c =
          dbp::ContaminateScenario(config, prepared, base, fraction, wanted, sc_seed);
      WriteText(sc_out, dbp::WriteEnvCsv(c.dataset));
      if (!sc_nodes_out.empty()) {
        std::string list;
        for (const auto& id : c.contaminated) list += id + "\n";
        WriteText(sc_nodes_out, list);
      }
      std::cerr << c.contaminated.size() << " nodes contaminated\n";
      return 0;
    }
    if (*generate) {
      dbp::Network net;
      if (kind == "tree") {
        net = dbp::MakeDeadEndNetwork(size ? size : 227, gen_seed);
      } else if (kind == "grid") {
        const std::size_t rows = size ? size : 25;
        net = dbp::MakeGridNetwork(rows, 40, gen_seed);
      } else {
        net = dbp::MakeDemoNetwork();
      }
      WriteText(gen_out, dbp::WriteInp(net));
      if (!gen_contracts.empty()) WriteText(gen_contracts, dbp::WriteContractsCsv(dbp::MakeContracts(net, gen_seed)));
      return 0;
    }
    if (*tmpl) {
      std::cout << (which == "env" ? dbp::EnvTemplateCsv() : dbp::ContractsTemplateCsv());
      return 0;
    }
  } catch (const dbp::Error& e) {
    std::cerr << "error [" << dbp::ErrorCodeName(e.code()) << "]: " << e.what() << "\n";
    return 1;
  } catch (const json::exception& e) {
    std::cerr << "error [ConfigError]: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
