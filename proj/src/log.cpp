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

#include "dbp/log.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string>

#include "dbp/strings.hpp"

namespace dbp {

namespace {

LogLevel FromEnv() {
  const char* v = std::getenv("DBP_LOG");
  if (!v) return LogLevel::kWarn;
  const std::string s = ToUpper(v);
  if (s == "ERROR") return LogLevel::kError;
  if (s == "INFO") return LogLevel::kInfo;
  if (s == "DEBUG") return LogLevel::kDebug;
  return LogLevel::kWarn;
}

std::atomic<int>& Level() {
  static std::atomic<int> level{static_cast<int>(FromEnv())};
  return level;
}

std::mutex& Sink() {
  static std::mutex m;
  return m;
}

constexpr const char* kNames[] = {"error", "warn", "info", "debug"};

}  // namespace

LogLevel CurrentLogLevel() { return static_cast<LogLevel>(Level().load()); }

void SetLogLevel(LogLevel level) { Level().store(static_cast<int>(level)); }

void Log(LogLevel level, std::string_view message) {
  if (static_cast<int>(level) > Level().load()) return;
  std::lock_guard<std::mutex> lock(Sink());
  std::cerr << "[dbp " << kNames[static_cast<int>(level)] << "] " << message << '\n';
}

}  // namespace dbp
