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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dbp {

std::string_view Trim(std::string_view s);
std::vector<std::string> SplitWhitespace(std::string_view s);
// Splits one CSV line on commas. Double-quoted fields may contain commas.
std::vector<std::string> SplitCsvLine(std::string_view line);
std::string ToUpper(std::string_view s);

// Whole-token numeric parse; rejects trailing garbage, NaN and infinities.
std::optional<double> ParseDouble(std::string_view s);

// Shortest representation that reads back to the same double.
std::string FormatDouble(double v);

// Fixed two-decimal rendering (for already-rounded scores).
std::string FormatFixed2(double v);

}  // namespace dbp
