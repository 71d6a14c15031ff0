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

#include "dbp/error.hpp"

namespace dbp {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMissingSection: return "MissingSection";
    case ErrorCode::kDanglingReference: return "DanglingReference";
    case ErrorCode::kMalformedRow: return "MalformedRow";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kUnsupportedUnits: return "UnsupportedUnits";
    case ErrorCode::kNonConvergence: return "NonConvergence";
    case ErrorCode::kUnsupportedElement: return "UnsupportedElement";
    case ErrorCode::kDisconnected: return "Disconnected";
    case ErrorCode::kCyclicFlowGraph: return "CyclicFlowGraph";
    case ErrorCode::kCountExceedsNodes: return "CountExceedsNodes";
    case ErrorCode::kUnknownNode: return "UnknownNode";
    case ErrorCode::kNoObservations: return "NoObservations";
    case ErrorCode::kSingularSystem: return "SingularSystem";
    case ErrorCode::kInfeasibleTarget: return "InfeasibleTarget";
    case ErrorCode::kMissingVariable: return "MissingVariable";
    case ErrorCode::kNonPositiveBase: return "NonPositiveBase";
    case ErrorCode::kSyntaxError: return "SyntaxError";
    case ErrorCode::kUnknownCharacter: return "UnknownCharacter";
    case ErrorCode::kDomainError: return "DomainError";
    case ErrorCode::kEmptyCandidateSet: return "EmptyCandidateSet";
    case ErrorCode::kMetricUnavailable: return "MetricUnavailable";
    case ErrorCode::kNoScenarios: return "NoScenarios";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

}  // namespace dbp
