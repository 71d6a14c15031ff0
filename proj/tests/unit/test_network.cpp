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

#include <algorithm>
#include <set>

#include "dbp/error.hpp"
#include "dbp/network.hpp"
#include "dbp/synthetic.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace dbp;

namespace {

const char* kMinimal = R"([RESERVOIRS]
R1 100
[JUNCTIONS]
J1 50 1.5
J2 40 2.5
[PIPES]
P1 R1 J1 100 200 120
P2 J1 J2 100 150 120
)";

ErrorCode CodeOf(const std::string& text, std::size_t* line = nullptr) {
  try {
    ParseInp(text);
  } catch (const ParseError& e) {
    if (line) *line = e.line();
    return e.code();
  }
  FAIL("expected a parse error");
  return ErrorCode::kIo;
}

}  // namespace

TEST_CASE("minimal file parses to three nodes and two pipes") {
  const Network net = ParseInp(kMinimal);
  CHECK(net.nodes.size() == 3);
  CHECK(net.pipes.size() == 2);
  CHECK(net.JunctionCount() == 2);
  CHECK(net.node("R1").fixed_head());
  CHECK(net.node("R1").head == 100.0);
  CHECK(net.node("J2").base_demand == 2.5);
  CHECK(ValidateNetwork(net).empty());
}

TEST_CASE("bundled dead-end network has 227 junctions, one tank, one reservoir") {
  const std::string text = fixture::ReadData("deadend_227.inp");
  const Network net = ParseInp(text);
  std::size_t tanks = 0, reservoirs = 0;
  for (const auto& n : net.nodes) {
    tanks += n.kind == NodeKind::kTank;
    reservoirs += n.kind == NodeKind::kReservoir;
  }
  CHECK(net.JunctionCount() == 227);
  CHECK(tanks == 1);
  CHECK(reservoirs == 1);
  CHECK(ValidateNetwork(net).empty());
}

TEST_CASE("node and pipe counts match an independent line count") {
  for (const char* name : {"demo.inp", "deadend_227.inp", "grid_1000.inp"}) {
    CAPTURE(name);
    const std::string text = fixture::ReadData(name);
    const auto rows = oracle::CountRows(text);
    const Network net = ParseInp(text);
    const std::size_t node_rows = (rows.count("JUNCTIONS") ? rows.at("JUNCTIONS") : 0) +
                                  (rows.count("RESERVOIRS") ? rows.at("RESERVOIRS") : 0) +
                                  (rows.count("TANKS") ? rows.at("TANKS") : 0);
    CHECK(net.nodes.size() == node_rows);
    CHECK(net.pipes.size() == rows.at("PIPES"));
  }
}

TEST_CASE("unknown node in a pipe row is a dangling reference with its line") {
  std::string text = kMinimal;
  text += "P3 J2 Z9 100 150 120\n";
  std::size_t line = 0;
  CHECK(CodeOf(text, &line) == ErrorCode::kDanglingReference);
  CHECK(line == 9);
}

TEST_CASE("malformed rows report their line") {
  std::size_t line = 0;
  CHECK(CodeOf("[RESERVOIRS]\nR1 100\n[JUNCTIONS]\nJ1 fifty 1\n[PIPES]\nP1 R1 J1 1 1 1\n", &line) ==
        ErrorCode::kMalformedRow);
  CHECK(line == 4);
  CHECK(CodeOf("[RESERVOIRS]\nR1 100\n[JUNCTIONS]\nJ1 50 1\n[PIPES]\nP1 R1 J1 100 200\n", &line) ==
        ErrorCode::kMalformedRow);
  CHECK(line == 6);
  CHECK(CodeOf("[RESERVOIRS]\nR1 100\n[JUNCTIONS]\nJ1 50 1\n[PIPES]\nP1 R1 J1 -5 200 120\n") ==
        ErrorCode::kMalformedRow);
  CHECK(CodeOf("[RESERVOIRS]\nR1 100\n[JUNCTIONS]\nJ1 50 1\n[PIPES]\nP1 J1 J1 5 200 120\n") ==
        ErrorCode::kMalformedRow);
}

TEST_CASE("missing junctions or fixed-head nodes") {
  CHECK(CodeOf("[RESERVOIRS]\nR1 100\n[PIPES]\n") == ErrorCode::kMissingSection);
  CHECK(CodeOf("[JUNCTIONS]\nJ1 50 1\nJ2 50 1\n[PIPES]\nP1 J1 J2 1 1 1\n") == ErrorCode::kMissingSection);
}

TEST_CASE("duplicate ids are rejected") {
  CHECK(CodeOf("[RESERVOIRS]\nR1 100\n[JUNCTIONS]\nR1 50 1\n[PIPES]\n") == ErrorCode::kDuplicateId);
}

TEST_CASE("only SI flow units are accepted and converted to L/s") {
  std::string text = kMinimal;
  CHECK(CodeOf(text + "[OPTIONS]\nUnits GPM\n") == ErrorCode::kUnsupportedUnits);
  CHECK(CodeOf(text + "[OPTIONS]\nUnits CFS\n") == ErrorCode::kUnsupportedUnits);
  CHECK(CodeOf(text + "[OPTIONS]\nHeadloss D-W\n") == ErrorCode::kUnsupportedUnits);
  const Network lpm = ParseInp(text + "[OPTIONS]\nUnits LPM\n");
  CHECK(lpm.node("J1").base_demand == doctest::Approx(1.5 / 60.0));
  const Network cmh = ParseInp(text + "[OPTIONS]\nUnits CMH\n");
  CHECK(cmh.node("J2").base_demand == doctest::Approx(2.5 / 3.6));
}

TEST_CASE("comments, whitespace and section order do not matter") {
  const std::string reordered = R"(; a comment line
[PIPES]
  P2   J1 J2 100 150 120 ; trailing comment
P1	R1	J1	100	200	120

[JUNCTIONS]
;ID Elev Demand
J1 50 1.5
   J2 40 2.5
[RESERVOIRS]
R1 100
)";
  const Network a = ParseInp(kMinimal);
  const Network b = ParseInp(reordered);
  CHECK(a.nodes.size() == b.nodes.size());
  for (const auto& n : a.nodes) CHECK(b.node(n.id) == n);
  for (const auto& p : a.pipes) CHECK(b.pipes[*b.FindPipe(p.id)] == p);
}

TEST_CASE("demands, coordinates, quality, reactions and times are honoured") {
  const std::string text = std::string(kMinimal) + R"([DEMANDS]
J1 0.5
J1 0.25
[COORDINATES]
J1 10 20
[QUALITY]
R1 1.2
[REACTIONS]
Order Bulk 2
Global Bulk -0.48
[TIMES]
Quality Timestep 0:10
[TAGS]
NODE J1 main
)";
  const Network net = ParseInp(text);
  CHECK(net.node("J1").base_demand == 0.75);
  REQUIRE(net.node("J1").coord);
  CHECK(net.node("J1").coord->x == 10.0);
  CHECK_FALSE(net.node("J2").coord);
  CHECK(net.node("R1").initial_quality == 1.2);
  CHECK(net.reaction_order == 2.0);
  CHECK(net.bulk_coeff == doctest::Approx(0.02));
  CHECK(net.quality_timestep == 600.0);
  REQUIRE(net.opaque_sections.size() == 1);
  CHECK(net.opaque_sections[0].name == "TAGS");
}

TEST_CASE("tanks become fixed-head nodes at elevation plus initial level") {
  const Network net = ParseInp(R"([TANKS]
T1 80 5 1 10 20 0
[JUNCTIONS]
J1 50 1
[PIPES]
P1 T1 J1 100 200 120
)");
  CHECK(net.node("T1").head == 85.0);
  CHECK(net.node("T1").kind == NodeKind::kTank);
}

TEST_CASE("pumps and valves are kept as unsupported elements") {
  const Network net = ParseInp(std::string(kMinimal) + "[PUMPS]\nPU1 J1 J2 HEAD C1\n[VALVES]\nV1 J2 J1 100 PRV 30 0\n");
  REQUIRE(net.unsupported_elements.size() == 2);
  CHECK(net.unsupported_elements[0].section == "PUMPS");
  CHECK(net.unsupported_elements[1].id == "V1");
}

TEST_CASE("write then parse reproduces the network field for field") {
  for (const Network& net : {ParseInp(kMinimal), ParseInp(fixture::kOneLoop), MakeDemoNetwork(),
                             MakeDeadEndNetwork(), MakeGridNetwork(6, 7, 3)}) {
    const Network back = ParseInp(WriteInp(net));
    CHECK(back == net);
  }
  const std::string rich = std::string(kMinimal) + R"([COORDINATES]
J1 1.5 -2.25
[QUALITY]
R1 0.8
[REACTIONS]
Global Bulk -0.37
Order Bulk 1.5
Global Wall -0.1
[TIMES]
Quality Timestep 0:05:30
Duration 72:00
[PUMPS]
PU1 J1 J2 HEAD C1
[CURVES]
C1 0 50
)";
  const Network net = ParseInp(rich);
  CHECK(ParseInp(WriteInp(net)) == net);
}

TEST_CASE("validate: connected tree is clean") {
  CHECK(ValidateNetwork(MakeDeadEndNetwork(40, 5)).empty());
}

TEST_CASE("validate: junction behind a closed pipe is isolated") {
  std::string text = kMinimal;
  text.replace(text.find("P2 J1 J2 100 150 120"), 20, "P2 J1 J2 100 150 120 0 Closed");
  const auto diags = ValidateNetwork(ParseInp(text));
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].kind == DiagnosticKind::kIsolatedByClosedPipe);
  CHECK(diags[0].subject == "J2");
}

TEST_CASE("validate: every junction of a sourceless component is listed") {
  const Network net = ParseInp(R"([RESERVOIRS]
R1 100
[JUNCTIONS]
A1 50 1
A2 50 1
B1 40 1
B2 40 1
B3 40 1
[PIPES]
P1 R1 A1 100 200 120
P2 A1 A2 100 200 120
P3 B1 B2 100 200 120
P4 B2 B3 100 200 120
)");
  std::set<std::string> listed;
  for (const auto& d : ValidateNetwork(net)) {
    CHECK(d.kind == DiagnosticKind::kUnreachableJunction);
    listed.insert(d.subject);
  }
  CHECK(listed == oracle::UnreachableJunctions(net, false));
  CHECK(listed == std::set<std::string>{"B1", "B2", "B3"});
}

TEST_CASE("validate: zero-demand network") {
  const Network net = ParseInp("[RESERVOIRS]\nR1 100\n[JUNCTIONS]\nJ1 50\n[PIPES]\nP1 R1 J1 10 100 120\n");
  const auto diags = ValidateNetwork(net);
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].kind == DiagnosticKind::kZeroDemand);
}

TEST_CASE("validate: reachability agrees with BFS on random graphs") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Network net = MakeGridNetwork(5, 6, seed);
    // Close a pseudo-random third of the pipes.
    for (std::size_t i = 0; i < net.pipes.size(); ++i) {
      if ((i * 7 + seed) % 3 == 0) net.pipes[i].status = LinkStatus::kClosed;
    }
    const auto open_unreached = oracle::UnreachableJunctions(net, true);
    const auto any_unreached = oracle::UnreachableJunctions(net, false);
    std::set<std::string> isolated, unreachable;
    for (const auto& d : ValidateNetwork(net)) {
      if (d.kind == DiagnosticKind::kIsolatedByClosedPipe) isolated.insert(d.subject);
      if (d.kind == DiagnosticKind::kUnreachableJunction) unreachable.insert(d.subject);
    }
    std::set<std::string> expected_isolated;
    std::set_difference(open_unreached.begin(), open_unreached.end(), any_unreached.begin(),
                        any_unreached.end(), std::inserter(expected_isolated, expected_isolated.end()));
    CHECK(isolated == expected_isolated);
    CHECK(unreachable == any_unreached);
  }
}
