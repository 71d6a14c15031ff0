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

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

namespace dbp {

struct ServiceResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

// Local HTTP JSON API over the run pipeline. Each accepted run is written to
// its own directory under runs_dir; nothing else is kept between requests.
class Service {
 public:
  explicit Service(std::filesystem::path runs_dir);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // POST /runs. config_json may be empty (defaults).
  ServiceResponse SubmitRun(const std::string& config_json, const std::string& inp,
                            const std::optional<std::string>& env,
                            const std::optional<std::string>& contracts);
  ServiceResponse GetRun(const std::string& id) const;
  ServiceResponse GetScores(const std::string& id) const;
  ServiceResponse GetNetwork(const std::string& id) const;
  static ServiceResponse EnvTemplate();
  static ServiceResponse ContractsTemplate();

  // Binds and returns the port (0 picks a free one); -1 on failure.
  int Bind(const std::string& host, int port);
  // Blocks until Stop().
  bool Listen();
  void Stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace dbp
