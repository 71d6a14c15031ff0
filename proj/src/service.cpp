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

#include "dbp/service.hpp"

#include <atomic>
#include <fstream>
#include <regex>
#include <sstream>

#include "dbp/env_data.hpp"
#include "dbp/error.hpp"
#include "dbp/log.hpp"
#include "dbp/pipeline.hpp"
#include "httplib.h"
#include "json.hpp"

namespace dbp {

namespace fs = std::filesystem;
using nlohmann::json;

struct Service::Impl {
  fs::path root;
  std::atomic<unsigned long long> next_id{1};
  httplib::Server server;
};

namespace {

ServiceResponse JsonError(int status, const std::string& code, const std::string& message) {
  return {status, "application/json", json{{"error", code}, {"message", message}}.dump() + "\n"};
}

bool ValidId(const std::string& id) {
  static const std::regex pattern("run-[0-9]{6,}");
  return std::regex_match(id, pattern);
}

std::optional<std::string> Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

unsigned long long HighestId(const fs::path& root) {
  unsigned long long best = 0;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(root, ec)) {
    const std::string name = entry.path().filename().string();
    if (ValidId(name)) best = std::max(best, std::stoull(name.substr(4)));
  }
  return best;
}

void Send(httplib::Response& res, const ServiceResponse& r) {
  res.status = r.status;
  res.set_content(r.body, r.content_type);
}

}  // namespace

Service::Service(fs::path runs_dir) : impl_(std::make_unique<Impl>()) {
  impl_->root = std::move(runs_dir);
  fs::create_directories(impl_->root);
  impl_->next_id = HighestId(impl_->root) + 1;

  auto& s = impl_->server;
  s.Post("/runs", [this](const httplib::Request& req, httplib::Response& res) {
    std::string config, inp;
    std::optional<std::string> env, contracts;
    if (req.is_multipart_form_data()) {
      if (!req.has_file("inp")) return Send(res, JsonError(400, "MissingInput", "multipart field 'inp' is required"));
      inp = req.get_file_value("inp").content;
      if (req.has_file("config")) config = req.get_file_value("config").content;
      if (req.has_file("env")) env = req.get_file_value("env").content;
      if (req.has_file("contracts")) contracts = req.get_file_value("contracts").content;
    } else {
      json body;
      try {
        body = json::parse(req.body);
      } catch (const json::exception& e) {
        return Send(res, JsonError(400, "MalformedRequest", e.what()));
      }
      if (!body.is_object() || !body.contains("inp") || !body["inp"].is_string()) {
        return Send(res, JsonError(400, "MissingInput", "JSON body needs a string 'inp'"));
      }
      inp = body["inp"].get<std::string>();
      if (body.contains("config")) config = body["config"].dump();
      if (body.contains("env") && body["env"].is_string()) env = body["env"].get<std::string>();
      if (body.contains("contracts") && body["contracts"].is_string()) {
        contracts = body["contracts"].get<std::string>();
      }
    }
    Send(res, SubmitRun(config, inp, env, contracts));
  });
  s.Get(R"(/runs/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    Send(res, GetRun(req.matches[1]));
  });
  s.Get(R"(/runs/([^/]+)/scores)", [this](const httplib::Request& req, httplib::Response& res) {
    Send(res, GetScores(req.matches[1]));
  });
  s.Get(R"(/network/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    Send(res, GetNetwork(req.matches[1]));
  });
  s.Get("/templates/env", [](const httplib::Request&, httplib::Response& res) { Send(res, EnvTemplate()); });
  s.Get("/templates/contracts", [](const httplib::Request&, httplib::Response& res) {
    Send(res, ContractsTemplate());
  });
}

Service::~Service() { Stop(); }

ServiceResponse Service::SubmitRun(const std::string& config_json, const std::string& inp,
                                   const std::optional<std::string>& env,
                                   const std::optional<std::string>& contracts) {
  RunConfig config;
  RunResult result;
  try {
    if (!config_json.empty()) {
      json parsed;
      try {
        parsed = json::parse(config_json);
      } catch (const json::exception& e) {
        throw Error(ErrorCode::kConfigError, std::string("config is not JSON: ") + e.what());
      }
      config = ConfigFromJson(parsed);
    }
    result = RunPipeline(config, RunInputs{inp, env, contracts});
  } catch (const Error& e) {
    return JsonError(400, std::string(ErrorCodeName(e.code())), e.what());
  }

  // Directory creation is the only shared step; create_directory fails on
  // an existing name, so a clash just moves on to the next id.
  std::string id;
  fs::path dir;
  for (;;) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "run-%06llu", impl_->next_id.fetch_add(1));
    id = buf;
    dir = impl_->root / id;
    std::error_code ec;
    if (fs::create_directory(dir, ec)) break;
    if (ec) return JsonError(500, "Io", "cannot create run directory: " + ec.message());
  }
  try {
    WriteRunDirectory(result, dir);
    fs::create_directory(dir / "inputs");
    std::ofstream(dir / "inputs" / "network.inp", std::ios::binary) << inp;
    if (env) std::ofstream(dir / "inputs" / "env.csv", std::ios::binary) << *env;
    if (contracts) std::ofstream(dir / "inputs" / "contracts.csv", std::ios::binary) << *contracts;
  } catch (const Error& e) {
    return JsonError(500, std::string(ErrorCodeName(e.code())), e.what());
  }
  Log(LogLevel::kInfo, "stored " + id);
  return {201, "application/json", json{{"id", id}}.dump() + "\n"};
}

ServiceResponse Service::GetRun(const std::string& id) const {
  if (!ValidId(id)) return JsonError(404, "UnknownRun", "no run '" + id + "'");
  auto body = Slurp(impl_->root / id / "result.json");
  if (!body) return JsonError(404, "UnknownRun", "no run '" + id + "'");
  return {200, "application/json", *body};
}

ServiceResponse Service::GetScores(const std::string& id) const {
  if (!ValidId(id)) return JsonError(404, "UnknownRun", "no run '" + id + "'");
  auto body = Slurp(impl_->root / id / "scores.csv");
  if (!body) return JsonError(404, "UnknownRun", "no run '" + id + "'");
  return {200, "text/csv", *body};
}

ServiceResponse Service::GetNetwork(const std::string& id) const {
  if (!ValidId(id)) return JsonError(404, "UnknownRun", "no run '" + id + "'");
  auto body = Slurp(impl_->root / id / "network.json");
  if (!body) return JsonError(404, "UnknownRun", "no run '" + id + "'");
  return {200, "application/json", *body};
}

ServiceResponse Service::EnvTemplate() { return {200, "text/csv", EnvTemplateCsv()}; }

ServiceResponse Service::ContractsTemplate() { return {200, "text/csv", ContractsTemplateCsv()}; }

int Service::Bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool Service::Listen() { return impl_->server.listen_after_bind(); }

void Service::Stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

}  // namespace dbp
