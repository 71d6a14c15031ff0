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

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "dbp/env_data.hpp"
#include "dbp/formula.hpp"

namespace dbp {

// Regulatory limits (ug/L).
inline constexpr double kThmThresholdEu = 100.0;
inline constexpr double kThmThresholdUs = 80.0;
inline constexpr double kHaaThresholdUs = 60.0;

// Sohn HAA9 pH exponent. One published form carries +0.799; the case-study
// form (applied here) carries -0.799.
inline constexpr double kSohnHaa9PhExponent = -0.799;

struct DbpFamily {
  std::string name;  // "THM", "HAA", "HAN" or a custom label
  double threshold = 0.0;  // ug/L, > 0
  double weight = 1.0;     // [0, 5]
};

// Throws kConfigError when threshold <= 0 or weight outside [0, 5].
void ValidateFamily(const DbpFamily& f);

// Default threshold for a family name; "EU" or "US" regulatory mode.
std::optional<double> DefaultThreshold(std::string_view family, std::string_view mode = "EU");

// Formula variables for a record: Contracts, Chlorine/Cl2, Temperature/Temp,
// pH, TOC, DON, BR/Br, time (hours), every extra column, and SUVA derived as
// 100 * UVA254 / DOC when not supplied.
std::map<std::string, double> RecordBindings(const EnvRecord& r, double time_hours);

// All return ug/L. Throw kMissingVariable / kNonPositiveBase.
double EvalSohnThm(const EnvRecord& r, double time_hours);
double EvalSohnHaa9(const EnvRecord& r, double time_hours,
                    double ph_exponent = kSohnHaa9PhExponent);

enum class BuiltinModel { kSohnThm, kSohnHaa9, kUyakThm, kOkojiHaa9, kHongHans };

std::optional<BuiltinModel> BuiltinFromName(std::string_view name);
std::string_view BuiltinName(BuiltinModel m);

double EvalBuiltin(BuiltinModel model, const EnvRecord& r, double time_hours);

// A family's concentration model: a built-in or a parsed custom formula.
class DbpModel {
 public:
  static DbpModel Builtin(BuiltinModel m, double sohn_haa9_ph_exponent = kSohnHaa9PhExponent);
  static DbpModel Custom(Formula f);
  // Built-in name or formula source.
  static DbpModel FromSpec(std::string_view spec, double sohn_haa9_ph_exponent = kSohnHaa9PhExponent);

  double Evaluate(const EnvRecord& r, double time_hours) const;
  std::string Describe() const;

 private:
  std::variant<BuiltinModel, Formula> impl_;
  double haa_ph_exponent_ = kSohnHaa9PhExponent;
};

}  // namespace dbp
