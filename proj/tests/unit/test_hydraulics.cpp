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

#include "dbp/error.hpp"
#include "dbp/hydraulics.hpp"
#include "dbp/synthetic.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace dbp;

TEST_CASE("Hazen-Williams headloss matches the SI formula") {
  // 10.667 * 1000 * 0.01^1.852 / (100^1.852 * 0.2^4.871)
  const double expected = 10.667 * 1000.0 * std::pow(0.01, 1.852) / (std::pow(100.0, 1.852) * std::pow(0.2, 4.871));
  CHECK(HazenWilliamsHeadloss(1000.0, 200.0, 100.0, 10.0) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(HazenWilliamsHeadloss(1000.0, 200.0, 100.0, -10.0) == doctest::Approx(-expected).epsilon(1e-12));
  CHECK(HazenWilliamsHeadloss(1000.0, 200.0, 100.0, 0.0) == 0.0);
}

TEST_CASE("one-loop flows agree with Hardy-Cross") {
  const Network net = ParseInp(fixture::kOneLoop);
  const FlowSolution sol = SolveFlows(net);
  std::vector<double> len, dia, c, q0;
  for (const auto& p : net.pipes) {
    len.push_back(p.length);
    dia.push_back(p.diameter / 1000.0);
    c.push_back(p.roughness);
  }
  // Continuity-satisfying start with the chord P5 at zero.
  q0 = {0.0135, 0.0105, 0.0065, 0.0030, 0.0};
  const auto q = oracle::HardyCross(q0, len, dia, c, {{{1, 1.0}, {2, 1.0}, {4, -1.0}, {3, -1.0}}});
  for (std::size_t i = 0; i < net.pipes.size(); ++i) {
    CAPTURE(net.pipes[i].id);
    CHECK(std::abs(sol.pipe_flows[i] - q[i] * 1000.0) <= 1e-4 * std::abs(q[i] * 1000.0));
  }
  // Signed headloss around the loop closes.
  auto loss = [&](const char* id) {
    const Pipe& p = net.pipes[*net.FindPipe(id)];
    return HazenWilliamsHeadloss(p.length, p.diameter, p.roughness, sol.flow(net, id));
  };
  CHECK(std::abs(loss("P2") + loss("P3") - loss("P5") - loss("P4")) < 1e-8);
  CHECK(sol.head(net, "R1") == 100.0);
  CHECK(sol.total_demand == doctest::Approx(13.5));
}

TEST_CASE("heads are consistent with headloss on every pipe") {
  const Network net = ParseInp(fixture::kOneLoop);
  const FlowSolution sol = SolveFlows(net);
  for (std::size_t i = 0; i < net.pipes.size(); ++i) {
    const Pipe& p = net.pipes[i];
    const double drop = sol.head(net, p.from) - sol.head(net, p.to);
    CHECK(drop == doctest::Approx(HazenWilliamsHeadloss(p.length, p.diameter, p.roughness, sol.pipe_flows[i]))
                       .epsilon(1e-6));
  }
}

TEST_CASE("mass balance holds on every bundled network") {
  for (const char* name : {"demo.inp", "deadend_227.inp", "grid_1000.inp"}) {
    CAPTURE(name);
    const Network net = ReadInpFile(fixture::DataPath(name));
    const FlowSolution sol = SolveFlows(net);
    CHECK(MassBalanceResidual(net, sol.pipe_flows) <= 1e-8 * sol.total_demand);
    CHECK(sol.residual == MassBalanceResidual(net, sol.pipe_flows));
  }
}

TEST_CASE("tree flows equal downstream demand") {
  const Network net = MakeDeadEndNetwork(30, 9);
  const FlowSolution sol = SolveFlows(net);
  // Pipe into a leaf carries exactly the leaf's demand.
  for (std::size_t i = 0; i < net.pipes.size(); ++i) {
    const Pipe& p = net.pipes[i];
    bool leaf = true;
    for (const auto& q : net.pipes) leaf = leaf && q.from != p.to;
    if (leaf && net.node(p.to).kind == NodeKind::kJunction) {
      CHECK(sol.pipe_flows[i] == doctest::Approx(net.node(p.to).base_demand).epsilon(1e-9));
    }
  }
}

TEST_CASE("disconnected demand and pump-dependent connectivity are errors") {
  const char* disconnected = R"([RESERVOIRS]
R1 100
[JUNCTIONS]
J1 50 1
J2 50 1
[PIPES]
P1 R1 J1 100 200 120
P2 J1 J2 100 200 120 0 Closed
)";
  try {
    SolveFlows(ParseInp(disconnected));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDisconnected);
  }
  const char* pumped = R"([RESERVOIRS]
R1 100
[JUNCTIONS]
J1 50 1
J2 50 1
[PIPES]
P1 R1 J1 100 200 120
[PUMPS]
PU1 J1 J2 HEAD C1
)";
  try {
    SolveFlows(ParseInp(pumped));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnsupportedElement);
  }
}

TEST_CASE("zero-demand junction behind a closed pipe is left out") {
  const char* text = R"([RESERVOIRS]
R1 100
[JUNCTIONS]
J1 50 1
J2 50 0
[PIPES]
P1 R1 J1 100 200 120
P2 J1 J2 100 200 120 0 Closed
)";
  const Network net = ParseInp(text);
  const FlowSolution sol = SolveFlows(net);
  REQUIRE(sol.isolated.size() == 1);
  CHECK(sol.isolated[0] == "J2");
  CHECK(sol.flow(net, "P2") == 0.0);
  CHECK(sol.flow(net, "P1") == doctest::Approx(1.0));
}

TEST_CASE("two reservoirs at different heads push flow downhill") {
  const char* text = R"([RESERVOIRS]
R1 100
R2 90
[JUNCTIONS]
J1 50 0.5
[PIPES]
P1 R1 J1 1000 150 120
P2 J1 R2 1000 150 120
)";
  const Network net = ParseInp(text);
  const FlowSolution sol = SolveFlows(net);
  CHECK(sol.flow(net, "P1") > 0.0);
  CHECK(sol.flow(net, "P1") - sol.flow(net, "P2") == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(sol.head(net, "J1") < 100.0);
  CHECK(sol.head(net, "J1") > 90.0);
}
