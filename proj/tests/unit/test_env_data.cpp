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

#include <cmath>
#include <functional>
#include <random>
#include <set>

#include "dbp/dbp_models.hpp"
#include "dbp/error.hpp"
#include "dbp/hydraulics.hpp"
#include "dbp/scenario.hpp"
#include "dbp/synthetic.hpp"
#include "dbp/transport.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace dbp;
using std::chrono::hours;

namespace {

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no exception");
  return ErrorCode::kIo;
}

Timestamp T0() { return *ParseTimestamp("2024-01-01T00:00:00"); }

// Records for `nodes` at `count` timestamps spaced by `step`.
EnvDataset Grid(const std::vector<std::string>& nodes, int count, std::chrono::seconds step) {
  EnvDataset ds;
  for (int s = 0; s < count; ++s) {
    for (const auto& n : nodes) {
      EnvRecord r;
      r.timestamp = T0() + s * step;
      r.node = n;
      r.chlorine = 0.5;
      r.temperature = 15.0;
      r.ph = 7.5;
      r.toc = 2.0;
      r.don = 0.2;
      r.br = 3.0;
      ds.records.push_back(r);
    }
  }
  return ds;
}

std::vector<std::string> Ids(const Network& net, std::size_t count) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < count && i < net.nodes.size(); ++i) out.push_back(net.nodes[i].id);
  return out;
}

std::vector<double> Chlorine(const Network& net) {
  const auto flows = SolveFlows(net);
  std::vector<std::string> src;
  for (const auto& n : net.nodes) {
    if (n.fixed_head()) src.push_back(n.id);
  }
  return Propagate(net, flows, src, {1.0, net.bulk_coeff, net.reaction_order}).chlorine;
}

}  // namespace

TEST_CASE("timestamp formats") {
  CHECK(ParseTimestamp("20-10-24 0:00") == ParseTimestamp("2024-10-20T00:00:00"));
  CHECK(ParseTimestamp("20-10-24 13:05") == ParseTimestamp("2024-10-20 13:05"));
  CHECK(ParseTimestamp("2024-10-20T13:05:09Z").has_value());
  CHECK(FormatTimestamp(*ParseTimestamp("05-01-24 7:30")) == "2024-01-05T07:30:00");
  CHECK_FALSE(ParseTimestamp("2024-13-01T00:00").has_value());
  CHECK_FALSE(ParseTimestamp("yesterday").has_value());
}

TEST_CASE("environmental template parses and round-trips") {
  const EnvDataset ds = ParseEnvCsv(EnvTemplateCsv());
  REQUIRE(ds.records.size() >= 4);
  const auto& r = ds.records[1];
  CHECK(r.node == "1_1001");
  CHECK(r.contracts == 5.0);
  CHECK(r.chlorine == 0.72);
  CHECK(r.temperature == 13.05);
  CHECK(r.ph == 7.4);
  CHECK(r.toc == 5.77);
  CHECK(r.don == 12.86);
  CHECK(r.br == 4.36);
  const EnvDataset again = ParseEnvCsv(WriteEnvCsv(ds));
  CHECK(again.records == ds.records);
  CHECK(EnvTemplateCsv().rfind("Timestamp,Node,Contracts,Chlorine (mg/L),Temperature,pH,TOC (mg/L),DON (mg/L),BR (mg/L)", 0) == 0);
}

TEST_CASE("extra columns become variables") {
  const EnvDataset ds = ParseEnvCsv(
      "Timestamp,Node,Contracts,Chlorine (mg/L),Temperature,pH,TOC (mg/L),DON (mg/L),BR (mg/L),SUVA,DOC\n"
      "20-10-24 0:00,J1,0,0.5,15,7,2,0.2,3,2.5,1.8\n");
  CHECK(ds.records[0].extras.at("SUVA") == 2.5);
  CHECK(ds.ExtraNames() == std::vector<std::string>{"DOC", "SUVA"});
  const EnvDataset again = ParseEnvCsv(WriteEnvCsv(ds));
  CHECK(again.records == ds.records);
}

TEST_CASE("environmental rows are validated") {
  const std::string hdr = "Timestamp,Node,Contracts,Chlorine (mg/L),Temperature,pH,TOC (mg/L),DON (mg/L),BR (mg/L)\n";
  auto line_of = [](const std::string& text) {
    try {
      ParseEnvCsv(text);
    } catch (const ParseError& e) {
      CHECK(e.code() == ErrorCode::kMalformedRow);
      return e.line();
    }
    FAIL("no exception");
    return std::size_t{0};
  };
  CHECK(line_of("Time,Node,Contracts,Chlorine (mg/L),Temperature,pH,TOC (mg/L),DON (mg/L),BR (mg/L)\n") == 1);
  CHECK(line_of(hdr + "20-10-24 0:00,J1,0,0.5,15,7,2,0.2,3\nbad,J1,0,0.5,15,7,2,0.2,3\n") == 3);
  CHECK(line_of(hdr + "20-10-24 0:00,J1,0,0.5,15,15,2,0.2,3\n") == 2);
  CHECK(line_of(hdr + "20-10-24 0:00,J1,0,-0.5,15,7,2,0.2,3\n") == 2);
  CHECK(line_of(hdr + "20-10-24 0:00,J1,0,x,15,7,2,0.2,3\n") == 2);
  CHECK(line_of(hdr + "20-10-24 0:00,J1,0,0.5,15,7,2,0.2,3\n20-10-24 0:00,J1,0,0.5,15,7,2,0.2,3\n") == 3);
}

TEST_CASE("contracts files") {
  const auto c = ParseContractsCsv("Node,Contracts\nJ1,2.5\nJ2,0\n");
  CHECK(c.size() == 2);
  CHECK(c.at("J1") == 2.5);
  CHECK(ParseContractsCsv("J1,4\n").at("J1") == 4.0);
  CHECK(ParseContractsCsv(WriteContractsCsv(c)) == c);
  CHECK(ParseContractsCsv(ContractsTemplateCsv()).at("1_1003") == 12.5);
  CHECK_THROWS_AS(ParseContractsCsv("J1,-1\n"), ParseError);
  CHECK_THROWS_AS(ParseContractsCsv("J1,1\nJ1,2\n"), ParseError);
  CHECK_THROWS_AS(ParseContractsCsv("J1\n"), ParseError);
}

TEST_CASE("completeness") {
  const Network net = MakeDemoNetwork();
  REQUIRE(net.nodes.size() == 10);
  const auto all = Ids(net, 10);

  SUBCASE("full hourly week is complete") {
    const auto rep = AssessCompleteness(Grid(all, 168, hours(1)), net);
    CHECK_FALSE(rep.incomplete);
    CHECK(rep.fully_populated);
    CHECK(rep.timestamp_count == 168);
    CHECK(rep.node_coverage == 1.0);
  }
  SUBCASE("coverage of exactly 0.30 is complete") {
    const auto rep = AssessCompleteness(Grid(Ids(net, 3), 24, hours(1)), net);
    CHECK(rep.node_coverage == 0.3);
    CHECK_FALSE(rep.incomplete);
    CHECK_FALSE(rep.fully_populated);
  }
  SUBCASE("sparse coverage or coarse interval is incomplete") {
    CHECK(AssessCompleteness(Grid(Ids(net, 2), 24, hours(1)), net).incomplete);
    CHECK(AssessCompleteness(Grid(all, 24, hours(2)), net).incomplete);
    CHECK(AssessCompleteness(Grid(all, 1, hours(1)), net).incomplete);
  }
  SUBCASE("quarterly measurements at three of 227 junctions") {
    const Network tree = MakeDeadEndNetwork();
    const auto rep = AssessCompleteness(Grid({"J001", "J100", "J200"}, 4, hours(24 * 91)), tree);
    CHECK(rep.incomplete);
    CHECK(rep.node_coverage == doctest::Approx(3.0 / 229.0));
    CHECK(rep.reasons.size() == 2);
  }
  SUBCASE("dropping one node moves coverage by exactly 1/|nodes|") {
    const auto full = AssessCompleteness(Grid(all, 24, hours(1)), net);
    for (std::size_t drop = 0; drop < all.size(); ++drop) {
      auto some = all;
      some.erase(some.begin() + static_cast<long>(drop));
      const auto rep = AssessCompleteness(Grid(some, 24, hours(1)), net);
      CHECK(rep.nodes_covered == full.nodes_covered - 1);
      CHECK(full.node_coverage - rep.node_coverage == doctest::Approx(1.0 / 10.0).epsilon(1e-14));
    }
  }
  SUBCASE("unknown nodes are rejected") {
    CHECK(CodeOf([&] { AssessCompleteness(Grid({"ghost"}, 2, hours(1)), net); }) == ErrorCode::kUnknownNode);
  }
}

TEST_CASE("range synthesis") {
  const Network net = MakeDemoNetwork();
  SynthesisOptions opt;
  opt.seed = 9;
  opt.chlorine_by_node = Chlorine(net);

  // Two observations spanning the temperature extremes of the template table.
  EnvDataset obs = Grid({"J1", "J2"}, 1, hours(1));
  obs.records[0].temperature = 12.12;
  obs.records[1].temperature = 23.91;
  obs.records[1].toc = 7.0;

  SynthesisReport rep;
  const EnvDataset ds = SynthesizeRanges(obs, net, opt, &rep);
  CHECK(ds.Timestamps().size() == 168);
  CHECK(ds.records.size() == 168 * net.nodes.size());
  CHECK(rep.synthesized_records == ds.records.size() - 2);
  CHECK(AssessCompleteness(ds, net).fully_populated);
  for (const auto& r : ds.records) {
    CHECK(r.temperature >= 12.12);
    CHECK(r.temperature <= 23.91);
    CHECK(r.toc >= 2.0);
    CHECK(r.toc <= 7.0);
    // Single observed value: degenerate range.
    CHECK(r.ph == 7.5);
    CHECK(r.don == 0.2);
  }
  // Chlorine comes from transport, not from the observations.
  for (const auto& r : ds.records) {
    if (r.timestamp == T0() && (r.node == "J1" || r.node == "J2")) continue;
    CHECK(r.chlorine == opt.chlorine_by_node[*net.FindNode(r.node)]);
  }
  // Observations are kept verbatim.
  CHECK(ds.records[*net.FindNode("J2")] == obs.records[1]);

  CHECK(WriteEnvCsv(SynthesizeRanges(obs, net, opt)) == WriteEnvCsv(ds));
  opt.seed = 10;
  CHECK(WriteEnvCsv(SynthesizeRanges(obs, net, opt)) != WriteEnvCsv(ds));
}

TEST_CASE("range synthesis without observations needs defaults") {
  const Network net = MakeDemoNetwork();
  SynthesisOptions opt;
  opt.chlorine_by_node = Chlorine(net);
  opt.start = T0();
  CHECK(CodeOf([&] { SynthesizeRanges({}, net, opt); }) == ErrorCode::kNoObservations);
  opt.default_ranges = BaselineRanges();
  opt.horizon_seconds = 24 * 3600;
  const EnvDataset ds = SynthesizeRanges({}, net, opt);
  CHECK(ds.records.size() == 24 * net.nodes.size());
  for (const auto& r : ds.records) {
    for (const auto& [name, range] : BaselineRanges()) {
      const double v = *RecordValue(r, name);
      CHECK(v >= range.lo);
      CHECK(v <= range.hi);
    }
  }
}

TEST_CASE("kriging is exact at samples") {
  const std::vector<KrigingSample> s{{{0, 0}, 1.0}, {{3, 1}, 4.0}, {{1, 5}, -2.0}};
  const auto est = Krige(s, {{3, 1}, {1, 5}}, Variogram{0.0, 2.0, 3.0});
  CHECK(est[0].value == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(est[1].value == doctest::Approx(-2.0).epsilon(1e-12));
}

TEST_CASE("kriging symmetric pair") {
  const auto est = Krige({{{0, 0}, 2.0}, {{2, 0}, 6.0}}, {{1, 0}, {1, 7}}, Variogram{0.0, 1.0, 1.0});
  for (const auto& e : est) {
    CHECK(e.weights[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(e.weights[1] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(e.value == doctest::Approx(4.0).epsilon(1e-14));
  }
}

TEST_CASE("kriging on the unit square matches a dense solve") {
  const std::vector<KrigingSample> s{{{0, 0}, 1.0}, {{1, 0}, 2.0}, {{0, 1}, 3.0}, {{1, 1}, 5.0}};
  const std::vector<oracle::Point> pts{{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  for (oracle::Point target : {oracle::Point{0.5, 0.5}, oracle::Point{0.2, 0.7}, oracle::Point{1.6, -0.3}}) {
    const auto w = oracle::KrigingWeights(pts, target, 0.0, 1.0, 1.0);
    double expected = 0.0;
    for (std::size_t i = 0; i < 4; ++i) expected += w[i] * s[i].value;
    const auto est = Krige(s, {{target.x, target.y}}, Variogram{0.0, 1.0, 1.0});
    CHECK(std::abs(est[0].value - expected) <= 1e-10);
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(est[0].weights[i] - w[i]) <= 1e-10);
  }
}

TEST_CASE("kriging weights sum to one and screening is flagged") {
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  std::vector<KrigingSample> s;
  for (int i = 0; i < 25; ++i) s.push_back({{u(gen), u(gen)}, u(gen)});
  std::vector<Coord> targets;
  for (int i = 0; i < 200; ++i) targets.push_back({u(gen), u(gen)});
  const Variogram v{0.5, 30.0, 40.0};
  const auto est = Krige(s, targets, v);
  double lo = 1e300, hi = -1e300;
  for (const auto& x : s) {
    lo = std::min(lo, x.value);
    hi = std::max(hi, x.value);
  }
  int screened = 0;
  for (std::size_t j = 0; j < est.size(); ++j) {
    double sum = 0.0;
    bool negative = false;
    for (double w : est[j].weights) {
      sum += w;
      negative = negative || w < 0.0;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-12);
    CHECK(est[j].negative_weights == negative);
    if (!negative) {
      CHECK(est[j].value >= lo - 1e-9);
      CHECK(est[j].value <= hi + 1e-9);
    }
    screened += negative;
  }
  // Screening is common with 25 scattered samples.
  CHECK(screened > 0);
}

TEST_CASE("kriging input errors") {
  CHECK(CodeOf([] { Krige({{{0, 0}, 1.0}, {{0, 0}, 2.0}}, {{1, 1}}, Variogram{}); }) == ErrorCode::kSingularSystem);
  CHECK(CodeOf([] { Krige({{{0, 0}, 1.0}}, {{1, 1}}, Variogram{}); }) == ErrorCode::kInvalidArgument);
  CHECK(CodeOf([] { Krige({{{0, 0}, 1.0}, {{1, 0}, 2.0}}, {{1, 1}}, Variogram{0.0, 1.0, 0.0}); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("variogram model") {
  const Variogram v{0.2, 1.2, 10.0};
  CHECK(v(0.0) == 0.0);
  CHECK(v(10.0) == doctest::Approx(0.2 + 1.0 * (1.0 - std::exp(-1.0))).epsilon(1e-15));
  CHECK(v(1e6) == doctest::Approx(1.2));
}

TEST_CASE("kriging gap fill stays inside its own flags") {
  const Network net = MakeDemoNetwork();
  SynthesisOptions opt;
  opt.seed = 4;
  opt.method = GapFill::kKriging;
  opt.chlorine_by_node = Chlorine(net);
  opt.horizon_seconds = 3 * 3600;
  EnvDataset obs = Grid({"J1", "J5", "J9"}, 3, hours(1));
  for (std::size_t i = 0; i < obs.records.size(); ++i) obs.records[i].toc = 1.0 + static_cast<double>(i % 3);
  SynthesisReport rep;
  const EnvDataset ds = SynthesizeRanges(obs, net, opt, &rep);
  CHECK(ds.records.size() == 3 * net.nodes.size());
  CHECK(rep.kriged_values > 0);
  for (const auto& r : ds.records) {
    CHECK(r.toc >= 1.0 - 1e-12);
    CHECK(r.toc <= 3.0 + 1e-12);
  }
}

TEST_CASE("centre-outward order") {
  // Path J1 - J2 - J3 - J4 - J5 from a reservoir at J1's end: R - J1 ... J5.
  const Network net = ParseInp(R"([JUNCTIONS]
J1 0 1
J2 0 1
J3 0 1
J4 0 1
J5 0 1
[RESERVOIRS]
R 10
[PIPES]
P0 R J1 10 100 100
P1 J1 J2 10 100 100
P2 J2 J3 10 100 100
P3 J3 J4 10 100 100
P4 J4 J5 10 100 100
)");
  // Eccentricities: J2 = J3 = 3, J1 = J4 = 4, J5 = 5.
  CHECK(CentreOutwardOrder(net) == std::vector<std::string>{"J2", "J3", "J1", "J4", "J5"});
}

TEST_CASE("scenario node counts") {
  CHECK(RoundHalfAwayCount(0.2 * 227) == 45);
  CHECK(RoundHalfAwayCount(2.5) == 3);
  CHECK(RoundHalfAwayCount(0.49) == 0);
}

namespace {

struct Baseline {
  Network net = MakeDeadEndNetwork();
  EnvDataset ds;
  Baseline() {
    SynthesisOptions opt;
    opt.seed = 1;
    opt.start = T0();
    opt.horizon_seconds = 24 * 3600;
    opt.default_ranges = BaselineRanges();
    opt.chlorine_by_node = Chlorine(net);
    ds = SynthesizeRanges({}, net, opt);
  }
};

std::vector<FamilyTarget> Targets(bool thm, bool haa) {
  std::vector<FamilyTarget> t;
  if (thm) t.push_back({"THM", DbpModel::FromSpec("sohn_thm"), 100.0});
  if (haa) t.push_back({"HAA", DbpModel::FromSpec("sohn_haa9"), 60.0});
  return t;
}

}  // namespace

TEST_CASE("contamination") {
  static const Baseline base;
  ContaminationOptions opt;
  opt.fraction = 0.2;
  opt.seed = 5;
  opt.targets = Targets(true, true);

  SUBCASE("twenty percent of 227 junctions, centre first, above threshold") {
    const auto res = Contaminate(base.ds, base.net, opt);
    CHECK(res.contaminated.size() == 45);
    const auto order = CentreOutwardOrder(base.net);
    CHECK(std::vector<std::string>(order.begin(), order.begin() + 45) == res.contaminated);
    std::set<std::string> chosen(res.contaminated.begin(), res.contaminated.end());
    std::map<std::string, std::pair<int, int>> above;  // node -> (thm, total)
    int haa_above = 0;
    for (const auto& r : res.dataset.records) {
      if (!chosen.count(r.node)) continue;
      auto& a = above[r.node];
      a.first += EvalSohnThm(r, 72.0) > 100.0;
      haa_above += EvalSohnHaa9(r, 72.0) > 60.0;
      ++a.second;
      CHECK(r.toc <= 50.0);
      CHECK(r.temperature <= 35.0);
      CHECK(r.chlorine <= 5.0);
    }
    CHECK(above.size() == 45);
    for (const auto& [node, a] : above) CHECK(a.first >= 0.9 * a.second);
    CHECK(haa_above >= static_cast<int>(0.9 * 45 * 24));
  }
  SUBCASE("fraction one contaminates every junction") {
    opt.fraction = 1.0;
    opt.targets = Targets(true, false);
    CHECK(Contaminate(base.ds, base.net, opt).contaminated.size() == 227);
  }
  SUBCASE("other nodes are untouched") {
    opt.targets = Targets(true, false);
    const auto res = Contaminate(base.ds, base.net, opt);
    std::set<std::string> chosen(res.contaminated.begin(), res.contaminated.end());
    REQUIRE(res.dataset.records.size() == base.ds.records.size());
    for (std::size_t i = 0; i < base.ds.records.size(); ++i) {
      if (!chosen.count(base.ds.records[i].node)) CHECK(res.dataset.records[i] == base.ds.records[i]);
    }
  }
  SUBCASE("same seed, same bytes") {
    CHECK(WriteEnvCsv(Contaminate(base.ds, base.net, opt).dataset) ==
          WriteEnvCsv(Contaminate(base.ds, base.net, opt).dataset));
  }
  SUBCASE("unreachable thresholds") {
    opt.targets = {{"THM", DbpModel::FromSpec("sohn_thm"), 1e9}};
    CHECK(CodeOf([&] { Contaminate(base.ds, base.net, opt); }) == ErrorCode::kInfeasibleTarget);
  }
}
