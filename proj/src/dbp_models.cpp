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

#include "dbp/dbp_models.hpp"

#include <cmath>

#include "dbp/error.hpp"
#include "dbp/strings.hpp"

namespace dbp {

void ValidateFamily(const DbpFamily& f) {
  if (f.name.empty()) throw Error(ErrorCode::kConfigError, "DBP family needs a name");
  if (!(f.threshold > 0.0)) {
    throw Error(ErrorCode::kConfigError, "threshold for " + f.name + " must be positive");
  }
  if (!(f.weight >= 0.0 && f.weight <= 5.0)) {
    throw Error(ErrorCode::kConfigError, "weight for " + f.name + " must lie in [0, 5]");
  }
}

std::optional<double> DefaultThreshold(std::string_view family, std::string_view mode) {
  const std::string fam = ToUpper(family);
  const std::string m = ToUpper(mode);
  if (fam == "THM") return m == "US" ? kThmThresholdUs : kThmThresholdEu;
  if (fam == "HAA") return kHaaThresholdUs;
  return std::nullopt;
}

std::map<std::string, double> RecordBindings(const EnvRecord& r, double time_hours) {
  std::map<std::string, double> b = r.extras;
  b["Contracts"] = r.contracts;
  b["Chlorine"] = b["Cl2"] = r.chlorine;
  b["Temperature"] = b["Temp"] = r.temperature;
  b["pH"] = r.ph;
  b["TOC"] = r.toc;
  b["DON"] = r.don;
  b["BR"] = b["Br"] = r.br;
  b["time"] = time_hours;
  if (!b.count("SUVA") && b.count("UVA254") && b.count("DOC") && b.at("DOC") > 0.0) {
    b["SUVA"] = 100.0 * b.at("UVA254") / b.at("DOC");
  }
  return b;
}

namespace {

double Extra(const std::map<std::string, double>& b, const char* name, const char* model) {
  auto it = b.find(name);
  if (it == b.end()) {
    throw Error(ErrorCode::kMissingVariable,
                std::string(model) + " requires variable '" + name + "'");
  }
  return it->second;
}

// Base for a fractional power; zero or negative bases are rejected.
double Positive(double v, const char* name, const char* model) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw Error(ErrorCode::kNonPositiveBase,
                std::string(model) + ": " + name + " must be positive (got " + FormatDouble(v) + ")");
  }
  return v;
}

void CheckTime(double t, const char* model) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw Error(ErrorCode::kNonPositiveBase, std::string(model) + ": reaction time must be >= 0");
  }
}

}  // namespace

double EvalSohnThm(const EnvRecord& r, double time_hours) {
  constexpr const char* kModel = "sohn_thm";
  CheckTime(time_hours, kModel);
  if (time_hours == 0.0) return 0.0;
  return 0.04121 * std::pow(Positive(r.toc, "TOC", kModel), 1.098) *
         std::pow(Positive(r.chlorine, "Cl2", kModel), 0.152) *
         std::pow(Positive(r.br, "BR", kModel), 0.068) *
         std::pow(Positive(r.temperature, "Temp", kModel), 0.609) *
         std::pow(Positive(r.ph, "pH", kModel), 1.601) * std::pow(time_hours, 0.263);
}

double EvalSohnHaa9(const EnvRecord& r, double time_hours, double ph_exponent) {
  constexpr const char* kModel = "sohn_haa9";
  CheckTime(time_hours, kModel);
  if (time_hours == 0.0) return 0.0;
  return 30.0 * std::pow(Positive(r.toc, "TOC", kModel), 0.997) *
         std::pow(Positive(r.chlorine, "Cl2", kModel), 0.278) *
         std::pow(Positive(r.br, "BR", kModel), -0.138) *
         std::pow(Positive(r.temperature, "Temp", kModel), 0.341) *
         std::pow(Positive(r.ph, "pH", kModel), ph_exponent) * std::pow(time_hours, 0.169);
}

namespace {

double EvalUyakThm(const EnvRecord& r, double t) {
  constexpr const char* kModel = "uyak_thm";
  const auto b = RecordBindings(r, t);
  const double suva = Extra(b, "SUVA", kModel);
  CheckTime(t, kModel);
  if (t == 0.0) return 0.0;
  return std::pow(10.0, -0.038) * std::pow(Positive(r.chlorine, "Cl2", kModel), 0.654) *
         std::pow(Positive(r.ph, "pH", kModel), 1.322) * std::pow(t, 0.174) *
         std::pow(Positive(suva, "SUVA", kModel), 0.712);
}

// Second-order polynomial; no reaction-time term. Negative values clamp to 0.
double EvalOkojiHaa9(const EnvRecord& r, double t) {
  constexpr const char* kModel = "okoji_haa9";
  const auto b = RecordBindings(r, t);
  const double uva = Extra(b, "UVA254", kModel);
  const double no2 = Extra(b, "NO2_N", kModel);
  const double doc = Extra(b, "DOC", kModel);
  const double nh4 = Extra(b, "NH4_N", kModel);
  const double temp = r.temperature;
  const double ph = r.ph;
  const double v = -345.0 + 1.695 * temp + 93.1 * ph - 226.0 * uva + 4.95 * r.chlorine +
                   5.66 * no2 + 16.6 * doc + 0.325 * nh4 - 0.0693 * temp * temp -
                   6.41 * ph * ph + 190821.0 * uva * uva - 1.73 * no2 * no2 -
                   3.77 * doc * doc - 0.01663 * nh4 * nh4;
  return v > 0.0 ? v : 0.0;
}

double EvalHongHans(const EnvRecord& r, double t) {
  constexpr const char* kModel = "hong_hans";
  const auto b = RecordBindings(r, t);
  const double doc = Extra(b, "DOC", kModel);
  CheckTime(t, kModel);
  if (t == 0.0) return 0.0;
  const double d = Positive(doc, "DOC", kModel);
  return std::pow(10.0, -1.065) * std::pow(Positive(r.br, "BR", kModel), 0.346) *
         std::pow(d, 0.369) * std::pow(Positive(r.chlorine, "Cl2", kModel) / d, 0.520) *
         std::pow(t, 0.238) * std::pow(Positive(r.temperature, "Temp", kModel), 0.373);
}

}  // namespace

std::optional<BuiltinModel> BuiltinFromName(std::string_view name) {
  if (name == "sohn_thm") return BuiltinModel::kSohnThm;
  if (name == "sohn_haa9") return BuiltinModel::kSohnHaa9;
  if (name == "uyak_thm") return BuiltinModel::kUyakThm;
  if (name == "okoji_haa9") return BuiltinModel::kOkojiHaa9;
  if (name == "hong_hans") return BuiltinModel::kHongHans;
  return std::nullopt;
}

std::string_view BuiltinName(BuiltinModel m) {
  switch (m) {
    case BuiltinModel::kSohnThm: return "sohn_thm";
    case BuiltinModel::kSohnHaa9: return "sohn_haa9";
    case BuiltinModel::kUyakThm: return "uyak_thm";
    case BuiltinModel::kOkojiHaa9: return "okoji_haa9";
    case BuiltinModel::kHongHans: return "hong_hans";
  }
  return "";
}

double EvalBuiltin(BuiltinModel model, const EnvRecord& r, double time_hours) {
  switch (model) {
    case BuiltinModel::kSohnThm: return EvalSohnThm(r, time_hours);
    case BuiltinModel::kSohnHaa9: return EvalSohnHaa9(r, time_hours);
    case BuiltinModel::kUyakThm: return EvalUyakThm(r, time_hours);
    case BuiltinModel::kOkojiHaa9: return EvalOkojiHaa9(r, time_hours);
    case BuiltinModel::kHongHans: return EvalHongHans(r, time_hours);
  }
  return 0.0;
}

DbpModel DbpModel::Builtin(BuiltinModel m, double sohn_haa9_ph_exponent) {
  DbpModel out;
  out.impl_ = m;
  out.haa_ph_exponent_ = sohn_haa9_ph_exponent;
  return out;
}

DbpModel DbpModel::Custom(Formula f) {
  DbpModel out;
  out.impl_ = std::move(f);
  return out;
}

DbpModel DbpModel::FromSpec(std::string_view spec, double sohn_haa9_ph_exponent) {
  if (auto b = BuiltinFromName(Trim(spec))) return Builtin(*b, sohn_haa9_ph_exponent);
  return Custom(Formula::Parse(spec));
}

double DbpModel::Evaluate(const EnvRecord& r, double time_hours) const {
  if (const auto* b = std::get_if<BuiltinModel>(&impl_)) {
    if (*b == BuiltinModel::kSohnHaa9) return EvalSohnHaa9(r, time_hours, haa_ph_exponent_);
    return EvalBuiltin(*b, r, time_hours);
  }
  return std::get<Formula>(impl_).Evaluate(RecordBindings(r, time_hours));
}

std::string DbpModel::Describe() const {
  if (const auto* b = std::get_if<BuiltinModel>(&impl_)) return std::string(BuiltinName(*b));
  return std::get<Formula>(impl_).source();
}

}  // namespace dbp
