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

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dbp {

// Every failure raised by the engine carries one of these codes so callers
// (CLI, HTTP layer, tests) can branch on the kind without parsing messages.
enum class ErrorCode {
  kMissingSection,
  kDanglingReference,
  kMalformedRow,
  kDuplicateId,
  kUnsupportedUnits,
  kNonConvergence,
  kUnsupportedElement,
  kDisconnected,
  kCyclicFlowGraph,
  kCountExceedsNodes,
  kUnknownNode,
  kNoObservations,
  kSingularSystem,
  kInfeasibleTarget,
  kMissingVariable,
  kNonPositiveBase,
  kSyntaxError,
  kUnknownCharacter,
  kDomainError,
  kEmptyCandidateSet,
  kMetricUnavailable,
  kNoScenarios,
  kConfigError,
  kInvalidArgument,
  kIo,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Raised by the .inp reader and the delimited-text readers. line() is
// 1-based; 0 means the error is not tied to a particular line.
class ParseError : public Error {
 public:
  ParseError(ErrorCode code, std::size_t line, const std::string& message)
      : Error(code, line ? "line " + std::to_string(line) + ": " + message
                         : message),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Raised by the formula tokenizer/parser; offset() is a 0-based character
// offset into the source string.
class FormulaSyntaxError : public Error {
 public:
  FormulaSyntaxError(ErrorCode code, std::size_t offset,
                     const std::string& message)
      : Error(code, "offset " + std::to_string(offset) + ": " + message),
        offset_(offset) {}

  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace dbp
