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
#include "mbqc/flow.hpp"
#include "oracles.hpp"

using namespace mbqc;

TEST_CASE("path has the successor flow", "[flow]") {
  const OpenGraph g = fixtures::line_graph();
  const auto fl = find_flow(g);
  REQUIRE(fl);
  for (long l = 1; l < 7; ++l)
    CHECK(fl->f[g.vertex_of(l)] == static_cast<int>(g.vertex_of(l + 1)));
  CHECK(fl->f[g.vertex_of(7)] == kNoVertex);
  CHECK(fl->depth() == 6);
  CHECK(verify_flow(g, *fl).empty());
}

TEST_CASE("graphs without flow", "[flow]") {
  const OpenGraph none = fixtures::no_gflow_graph();
  CHECK_FALSE(find_flow(none));
  CHECK_FALSE(max_delayed_gflow(none));

  const OpenGraph only = fixtures::gflow_only_graph();
  CHECK_FALSE(find_flow(only));
  const auto gf = max_delayed_gflow(only);
  REQUIRE(gf);
  CHECK(verify_gflow(only, *gf).empty());
  CHECK(gf->depth() == 2);
}

TEST_CASE("broken flows are reported", "[flow]") {
  const OpenGraph g = fixtures::line_graph();
  Flow fl = *find_flow(g);
  fl.f[g.vertex_of(3)] = static_cast<int>(g.vertex_of(5));
  CHECK_FALSE(verify_flow(g, fl).empty());

  GFlow ssf = ssf_from_flow(*find_flow(g), g);
  ssf.g[g.vertex_of(2)].reset();
  CHECK_FALSE(verify_gflow(g, ssf).empty());
}

TEST_CASE("line graph SSF correcting sets", "[flow]") {
  const OpenGraph g = fixtures::line_graph();
  const GFlow ssf = ssf_from_flow(*find_flow(g), g);
  // s(i) collects every other vertex after i, up to the output side.
  CHECK(g.format(ssf.g[g.vertex_of(1)]) == "{2,4,6}");
  CHECK(g.format(ssf.g[g.vertex_of(2)]) == "{3,5,7}");
  CHECK(g.format(ssf.g[g.vertex_of(6)]) == "{7}");
  CHECK(verify_gflow(g, ssf).empty());
}

TEST_CASE("flow properties on random graphs", "[flow][property]") {
  std::mt19937 rng(5);
  for (int t = 0; t < 150; ++t) {
    const OpenGraph g = oracles::random_flow_graph(rng, 11);
    const auto fl = find_flow(g);
    REQUIRE(fl);
    CHECK(verify_flow(g, *fl).empty());
    const GFlow ssf = ssf_from_flow(*fl, g);
    CHECK(verify_gflow(g, ssf).empty());
    CHECK(ssf.depth() <= fl->depth());
    // N_Z(j) are the i whose f(i) is adjacent to j.
    for (Vertex j = 0; j < g.n_vertices(); ++j) {
      const VertexSet nz = z_dependencies(g, *fl, j);
      for (Vertex i = 0; i < g.n_vertices(); ++i) {
        const bool want = fl->f[i] != kNoVertex && i != j &&
                          g.has_edge(static_cast<Vertex>(fl->f[i]), j);
        CHECK(nz.test(i) == want);
      }
    }
    const auto rounds = measurement_rounds(g, ssf);
    for (Vertex v = 0; v < g.n_vertices(); ++v)
      CHECK((rounds[v] == 0) == g.is_output(v));
  }
}

TEST_CASE("layer partition groups by value", "[flow]") {
  const auto parts = layer_partition({0, 2, 1, 2});
  REQUIRE(parts.size() == 3);
  CHECK(members(parts[0]) == std::vector<Vertex>{0});
  CHECK(members(parts[2]) == std::vector<Vertex>{1, 3});
}

TEST_CASE("flow and gflow JSON round trip", "[flow][json]") {
  const OpenGraph g = fixtures::example1_graph();
  const Flow fl = *find_flow(g);
  const Flow back = flow_from_json(g, flow_to_json(g, fl));
  CHECK(back.f == fl.f);
  const GFlow ssf = ssf_from_flow(fl, g);
  const GFlow gback = gflow_from_json(g, gflow_to_json(g, ssf));
  CHECK(gback.g == ssf.g);
}
