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
#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include "dbp/error.hpp"
#include "dbp/placement.hpp"
#include "doctest.h"
#include "instances.hpp"
#include "oracles.hpp"

using namespace dbp;

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

std::vector<std::string> CandidateIds(const Network& net) {
  std::vector<std::string> ids;
  for (const auto& n : net.nodes) {
    if (!n.fixed_head()) ids.push_back(n.id);
  }
  return ids;
}

}  // namespace

TEST_CASE("objective names") {
  for (auto o : kAllObjectives) CHECK(ObjectiveFromName(ObjectiveName(o)) == o);
  CHECK(ObjectiveName(ObjectiveKind::kTimeOfDetection) == "time_of_detection");
  CHECK(ObjectiveMinimizes(ObjectiveKind::kTimeOfDetection));
  CHECK_FALSE(ObjectiveMinimizes(ObjectiveKind::kContracts));
  CHECK_FALSE(ObjectiveFromName("fastest").has_value());
}

TEST_CASE("separable placement basics") {
  std::vector<NodeScore> c(3);
  const double t[] = {30, 5, 12};
  for (int i = 0; i < 3; ++i) {
    c[i].node = "N" + std::to_string(i);
    c[i].detection_time = t[i];
    c[i].events = {{"THM", 1}};
  }
  const auto one = PlaceSeparable(c, ObjectiveKind::kTimeOfDetection, 1, false);
  REQUIRE(one.size() == 1);
  CHECK(one[0] == PlacedNode{"N1", 5.0});
  const auto all = PlaceSeparable(c, ObjectiveKind::kTimeOfDetection, 10, false);
  CHECK(all == std::vector<PlacedNode>{{"N1", 5}, {"N2", 12}, {"N0", 30}});
  CHECK(CodeOf([&] { PlaceSeparable(c, ObjectiveKind::kContracts, 1, false); }) == ErrorCode::kMetricUnavailable);
  CHECK(CodeOf([&] { PlaceSeparable(c, ObjectiveKind::kHaaEvents, 1, false); }) == ErrorCode::kMetricUnavailable);
  CHECK(CodeOf([&] { PlaceSeparable({}, ObjectiveKind::kNormalizedScore, 1, false); }) == ErrorCode::kEmptyCandidateSet);
}

TEST_CASE("separable ties break by id") {
  std::vector<NodeScore> c(4);
  const char* ids[] = {"D", "B", "C", "A"};
  for (int i = 0; i < 4; ++i) {
    c[i].node = ids[i];
    c[i].contracts = i == 2 ? 1.0 : 5.0;
  }
  const auto got = PlaceSeparable(c, ObjectiveKind::kContracts, 2, true);
  CHECK(got == std::vector<PlacedNode>{{"A", 5}, {"B", 5}});
}

TEST_CASE("separable placement equals exhaustive subsets") {
  std::mt19937_64 gen(31);
  const Network net = instance::Junctions(10);
  for (int trial = 0; trial < 20; ++trial) {
    const auto c = instance::Scores(net, gen);
    for (auto o : kAllObjectives) {
      for (std::size_t k = 1; k <= 4; ++k) {
        double sum = 0.0;
        for (const auto& p : PlaceSeparable(c, o, k, true)) sum += p.metric;
        CHECK(sum == oracle::ExhaustiveSeparable(c, o, k));
      }
    }
  }
}

TEST_CASE("separable placement is invariant under monotone metric maps") {
  std::mt19937_64 gen(32);
  const Network net = instance::Junctions(12);
  for (int trial = 0; trial < 20; ++trial) {
    auto c = instance::Scores(net, gen);
    const auto before = PlaceSeparable(c, ObjectiveKind::kNormalizedScore, 5, false);
    for (auto& s : c) s.total = std::exp(s.total / 10.0) + 3.0;
    const auto after = PlaceSeparable(c, ObjectiveKind::kNormalizedScore, 5, false);
    for (std::size_t i = 0; i < before.size(); ++i) CHECK(before[i].node == after[i].node);
  }
}

TEST_CASE("expected time on small instances") {
  const Network net = instance::Junctions(4);
  const auto cand = CandidateIds(net);
  std::vector<TransportResult> sc(2);
  sc[0].arrival_minutes = {kInfinity, 10.0, 50.0, 5000.0, kInfinity};
  sc[1].arrival_minutes = {kInfinity, 90.0, 20.0, kInfinity, 7.0};
  // Node order in the instance network: J01..J04 then R.
  REQUIRE(net.nodes[0].id == "J01");
  sc[0].arrival_minutes = {10.0, 50.0, 5000.0, kInfinity, 0.0};
  sc[1].arrival_minutes = {90.0, 20.0, kInfinity, 7.0, 0.0};

  SUBCASE("full placement is the mean of per-scenario minima") {
    const auto p = PlaceExpectedTime(net, sc, cand, 4);
    CHECK(p.expected_minutes == doctest::Approx((10.0 + 7.0) / 2.0));
    CHECK(p.exact);
  }
  SUBCASE("undetected scenarios count at the horizon") {
    const auto p = PlaceExpectedTime(net, sc, {"J03"}, 1);
    CHECK(p.expected_minutes == kDefaultHorizonMinutes);
  }
  SUBCASE("single scenario picks the earliest arrival") {
    const auto p = PlaceExpectedTime(net, {sc[1]}, cand, 1, SearchMode::kGreedy);
    CHECK(p.nodes == std::vector<std::string>{"J04"});
    CHECK(p.expected_minutes == 7.0);
  }
  SUBCASE("errors") {
    CHECK(CodeOf([&] { PlaceExpectedTime(net, {}, cand, 1); }) == ErrorCode::kNoScenarios);
    CHECK(CodeOf([&] { PlaceExpectedTime(net, sc, {}, 1); }) == ErrorCode::kEmptyCandidateSet);
    CHECK(CodeOf([&] { PlaceExpectedTime(net, sc, {"nope"}, 1); }) == ErrorCode::kUnknownNode);
  }
}

TEST_CASE("expected time: exact path, greedy and exhaustive oracle") {
  std::mt19937_64 gen(41);
  const Network net = instance::Junctions(12);
  const auto cand = CandidateIds(net);
  double worst_ratio = 1.0;
  for (int trial = 0; trial < 30; ++trial) {
    const auto sc = instance::Scenarios(net, 6, gen);
    for (std::size_t k = 1; k <= 4; ++k) {
      const double opt = oracle::ExhaustiveExpected(net, sc, cand, k);
      const auto exact = PlaceExpectedTime(net, sc, cand, k);
      CHECK(exact.exact);
      CHECK(exact.expected_minutes == doctest::Approx(opt).epsilon(1e-12));
      const auto greedy = PlaceExpectedTime(net, sc, cand, k, SearchMode::kGreedy);
      CHECK_FALSE(greedy.exact);
      CHECK(greedy.nodes.size() == k);
      CHECK(greedy.expected_minutes >= opt * (1 - 1e-12));
      worst_ratio = std::max(worst_ratio, greedy.expected_minutes / opt);
      if (k == 1) CHECK(greedy.expected_minutes == doctest::Approx(opt).epsilon(1e-12));
    }
  }
  MESSAGE("worst greedy / optimum ratio: " << worst_ratio);
  CHECK(worst_ratio <= 1.05);
}

TEST_CASE("k = 1 agrees with sorting by mean arrival") {
  std::mt19937_64 gen(43);
  const Network net = instance::Junctions(40);
  const auto cand = CandidateIds(net);
  for (int trial = 0; trial < 10; ++trial) {
    const auto sc = instance::Scenarios(net, 25, gen);
    std::string best;
    double best_mean = kInfinity;
    for (const auto& id : cand) {
      double sum = 0.0;
      for (const auto& s : sc) sum += std::min(s.arrival_minutes[*net.FindNode(id)], kDefaultHorizonMinutes);
      const double mean = sum / 25.0;
      if (mean < best_mean) {
        best_mean = mean;
        best = id;
      }
    }
    const auto g = PlaceExpectedTime(net, sc, cand, 1, SearchMode::kGreedy);
    CHECK(g.nodes == std::vector<std::string>{best});
    CHECK(g.expected_minutes == doctest::Approx(best_mean).epsilon(1e-12));
  }
}

TEST_CASE("greedy steps never increase the objective") {
  std::mt19937_64 gen(44);
  const Network net = instance::Junctions(60);
  const auto sc = instance::Scenarios(net, 30, gen);
  const ArrivalMatrix m(net, sc, CandidateIds(net));
  const auto g = PlaceExpectedTime(m, 25, SearchMode::kGreedy);
  std::vector<std::size_t> chosen;
  double prev = kInfinity;
  for (const auto& id : g.nodes) {
    chosen.push_back(static_cast<std::size_t>(std::find(m.ids().begin(), m.ids().end(), id) - m.ids().begin()));
    const double v = m.Expected(chosen);
    CHECK(v <= prev);
    prev = v;
  }
  CHECK(prev == doctest::Approx(g.expected_minutes).epsilon(1e-12));
}

TEST_CASE("Pareto sweep is monotone and deterministic") {
  std::mt19937_64 gen(45);
  const Network net = instance::Junctions(80);
  const auto sc = instance::Scenarios(net, 40, gen);
  const auto cand = CandidateIds(net);
  const std::vector<std::size_t> ks{1, 2, 3, 5, 10, 20, 40, 80};
  const auto a = ParetoSweep(net, sc, cand, ks);
  REQUIRE(a.size() == ks.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].k == ks[i]);
    CHECK(a[i].nodes.size() == ks[i]);
    if (i) CHECK(a[i].expected_minutes <= a[i - 1].expected_minutes);
  }
  CHECK(ParetoSweep(net, sc, cand, ks) == a);
  // The last point places every candidate: the global minimum.
  const ArrivalMatrix m(net, sc, cand);
  std::vector<std::size_t> all(m.candidates());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  CHECK(a.back().expected_minutes == doctest::Approx(m.Expected(all)).epsilon(1e-12));
  CHECK(CodeOf([&] { ParetoSweep(net, sc, cand, {5, 3}); }) == ErrorCode::kInvalidArgument);
  CHECK(CodeOf([&] { ParetoSweep(net, sc, cand, {0}); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("consensus") {
  SUBCASE("one objective") {
    const auto c = ComputeConsensus({{"A", "B", "C", "D", "E"}});
    for (const auto& [id, share] : c.shares) CHECK(share == doctest::Approx(0.2));
  }
  SUBCASE("a node in all five lists") {
    std::vector<std::vector<std::string>> lists;
    for (int o = 0; o < 5; ++o) {
      std::vector<std::string> l{"X"};
      for (int i = 0; i < 4; ++i) l.push_back("N" + std::to_string(o * 4 + i));
      lists.push_back(l);
    }
    const auto c = ComputeConsensus(lists);
    CHECK(c.counts.at("X") == 5);
    CHECK(c.shares.at("X") == doctest::Approx(0.2));
    CHECK(c.total == 25);
  }
  SUBCASE("disjoint lists share uniformly and order does not matter") {
    std::vector<std::vector<std::string>> lists;
    for (int o = 0; o < 5; ++o) lists.push_back({"A" + std::to_string(o), "B" + std::to_string(o), "C" + std::to_string(o)});
    const auto c = ComputeConsensus(lists);
    for (const auto& [id, share] : c.shares) CHECK(share == doctest::Approx(1.0 / 15.0));
    std::reverse(lists.begin(), lists.end());
    const auto r = ComputeConsensus(lists);
    CHECK(r.counts == c.counts);
    CHECK(r.shares == c.shares);
  }
}
