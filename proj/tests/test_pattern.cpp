// Copyright 2019-2024 Cambridge Quantum Computing
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


#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "fixtures.hpp"
#include "mbqc/errors.hpp"
#include "mbqc/flow.hpp"
#include "mbqc/pattern.hpp"
#include "mbqc/sim.hpp"
#include "oracles.hpp"

using namespace mbqc;

namespace {

SignalSet dom(const OpenGraph &g, std::initializer_list<long> ls) {
  SignalSet s;
  for (long l : ls) s.insert(g.vertex_of(l));
  return s;
}

const Command *correction(const Pattern &p, CommandKind kind, Vertex q) {
  const Command *hit = nullptr;
  for (const Command &c : p.commands)
    if (c.kind == kind && c.qubit == q) {
      REQUIRE(hit == nullptr);
      hit = &c;
    }
  return hit;
}

}  // namespace

TEST_CASE("signal shift on the path", "[pattern]") {
  const OpenGraph g = fixtures::line_graph();
  AngleMap angles;
  for (Vertex v : members(g.non_outputs())) angles[v] = Angle(1, 4);
  const Flow fl = *find_flow(g);
  const Pattern p = flow_pattern(fl, g, angles);
  CHECK(runnability_violations(p).empty());
  CHECK(pattern_depth(p) == 6);

  const Pattern s = signal_shift(p, fl);
  CHECK(runnability_violations(s).empty());
  // Every measurement still waits on the previous one.
  CHECK(pattern_depth(s) == 6);
  auto at = [&](long l) { return g.vertex_of(l); };
  auto measure = [&](long l) -> const Command & {
    for (const Command &c : s.commands)
      if (c.kind == CommandKind::M && c.qubit == at(l)) return c;
    FAIL("no measurement");
    return s.commands.front();
  };
  for (long l = 1; l <= 6; ++l) CHECK(measure(l).t_domain.empty());
  CHECK(measure(1).s_domain.empty());
  CHECK(measure(2).s_domain == dom(g, {1}));
  CHECK(measure(5).s_domain == dom(g, {2, 4}));
  CHECK(measure(6).s_domain == dom(g, {1, 3, 5}));
  REQUIRE(correction(s, CommandKind::X, at(7)));
  CHECK(correction(s, CommandKind::X, at(7))->s_domain == dom(g, {2, 4, 6}));
  REQUIRE(correction(s, CommandKind::Z, at(7)));
  CHECK(correction(s, CommandKind::Z, at(7))->s_domain == dom(g, {1, 3, 5}));
  for (long l = 1; l <= 6; ++l) {
    CHECK(correction(s, CommandKind::X, at(l)) == nullptr);
    CHECK(correction(s, CommandKind::Z, at(l)) == nullptr);
  }
}

TEST_CASE("signal shift keeps the map and determinism", "[pattern][property]") {
  std::mt19937 rng(3);
  for (int t = 0; t < 40; ++t) {
    const Circuit c = oracles::random_circuit(rng, 2, 4, 3);
    const Pattern p = pattern_from_circuit(c);
    const OpenGraph g = graph_of(p);
    const Flow fl = *find_flow(g);
    const Pattern fp = flow_pattern(fl, g, angles_of(p));
    const Pattern s = signal_shift(fp, fl);
    const Pattern r = signal_shift(fp, fl, &rng);
    CHECK(to_string(canonical(s)) == to_string(canonical(r)));
    const Matrix u = circuit_unitary(c);
    CHECK(equivalent_up_to_phase(u, pattern_map(p)));
    CHECK(equivalent_up_to_phase(u, pattern_map(s)));
    CHECK(is_strongly_deterministic(s));
    CHECK(equivalent_up_to_phase(u, pattern_map(standardize(p))));
    CHECK(equivalent_up_to_phase(u, pattern_map(ssf_pattern(
                                        ssf_from_flow(fl, g), g, angles_of(p)))));
  }
}

TEST_CASE("Pauli simplification drops measurement dependencies", "[pattern]") {
  const Pattern p = pattern_from_circuit(fixtures::example2_circuit());
  const OpenGraph g = graph_of(p);
  const Flow fl = *find_flow(g);
  const Pattern s = signal_shift(flow_pattern(fl, g, angles_of(p)), fl);
  CHECK(pattern_depth(s) == 2);
  const Pattern both = pauli_simplify(s);
  CHECK(pattern_depth(both) == 1);
  CHECK(runnability_violations(both).empty());
  CHECK(gflow_of(both).depth() == 1);
  CHECK(equivalent_up_to_phase(pattern_map(s), pattern_map(both)));
  CHECK(is_strongly_deterministic(both));
}

TEST_CASE("unrunnable patterns are reported", "[pattern]") {
  const OpenGraph g = fixtures::line_graph();
  Pattern p;
  p.space = g;
  p.commands.push_back(Command::X(g.vertex_of(2), dom(g, {1})));
  p.commands.push_back(Command::M(g.vertex_of(1), Angle(0, 1)));
  CHECK_FALSE(runnability_violations(p).empty());
}

TEST_CASE("pattern JSON round trip", "[pattern][json]") {
  const Pattern p = pattern_from_circuit(fixtures::example1_circuit());
  const OpenGraph g = graph_of(p);
  const Flow fl = *find_flow(g);
  const Pattern s = signal_shift(flow_pattern(fl, g, angles_of(p)), fl);
  const Pattern back = pattern_from_json(pattern_to_json(s));
  CHECK(back.commands == s.commands);
  CHECK(back.space == s.space);
  CHECK_THROWS_AS(pattern_from_json(nlohmann::json::parse(R"({"commands":3})")),
                  InputError);
}

TEST_CASE("angles reduce modulo two pi", "[angle]") {
  CHECK(Angle(5, 2) == Angle(1, 2));
  CHECK(Angle(-1, 2) == Angle(3, 2));
  CHECK(Angle(2, 4) == Angle(1, 2));
  CHECK((Angle(1, 3) + Angle(5, 3)) == Angle(0, 1));
  CHECK((-Angle(1, 1)) == Angle(1, 1));
  CHECK(Angle(0, 1).is_multiple_of_pi());
  CHECK(Angle(3, 2).is_odd_half_pi());
  CHECK(angle_from_json(angle_to_json(Angle(7, 5))) == Angle(7, 5));
}
