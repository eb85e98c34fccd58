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

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mbqc/graph.hpp"

namespace mbqc {

constexpr int kNoVertex = -1;

/**
 * Causal flow. `f[v]` is kNoVertex on outputs. `layer` is the layering of
 * the induced order: outputs sit at 0 and earlier measurements get larger
 * values.
 */
struct Flow {
  std::vector<int> f;
  std::vector<unsigned> layer;

  unsigned depth() const;
  /** f^{-1}, kNoVertex where f has no preimage. */
  std::vector<int> inverse() const;
};

/** Generalised flow with set-valued correcting function. */
struct GFlow {
  std::vector<VertexSet> g;
  std::vector<unsigned> layer;

  unsigned depth() const;
};

struct Violation {
  std::string condition;
  Vertex vertex;
  std::string detail;

  std::string message() const;
};

std::optional<Flow> find_flow(const OpenGraph &g);

/**
 * Layering of the order generated by i < f(i) and i < N(f(i)) \ {i},
 * computed from its transitive closure by repeatedly peeling maximal
 * elements.
 */
std::vector<unsigned> flow_layering(
    const OpenGraph &g, const std::vector<int> &f);

std::vector<Violation> verify_flow(const OpenGraph &g, const Flow &fl);
std::vector<Violation> verify_gflow(const OpenGraph &g, const GFlow &gf);

/** N_Z(j): non-outputs whose flow correction puts a Z on j. */
VertexSet z_dependencies(const OpenGraph &g, const Flow &fl, Vertex j);

/** Parity of the number of Z-paths between each ordered pair. */
class ZPathParityTable {
 public:
  ZPathParityTable() = default;
  explicit ZPathParityTable(std::vector<VertexSet> columns)
      : columns_(std::move(columns)) {}

  bool parity(Vertex i, Vertex j) const { return columns_.at(j).test(i); }
  /** Sources i with odd parity towards j. */
  const VertexSet &column(Vertex j) const { return columns_.at(j); }
  unsigned size() const { return static_cast<unsigned>(columns_.size()); }

 private:
  std::vector<VertexSet> columns_;
};

ZPathParityTable zpath_parities(const Flow &fl, const OpenGraph &g);

/** Signal shifted flow with its as-late-as-possible layering. */
GFlow ssf_from_flow(const Flow &fl, const OpenGraph &g);

/**
 * As-soon-as-possible measurement rounds of a gflow: 0 on outputs, 1 for
 * measurements with no dependency, and so on.
 */
std::vector<unsigned> measurement_rounds(const OpenGraph &g, const GFlow &gf);

/** Group vertices by layer value; index k holds the vertices at layer k. */
std::vector<VertexSet> layer_partition(const std::vector<unsigned> &layer);

std::optional<GFlow> max_delayed_gflow(const OpenGraph &g);

struct ReducedOpenGraph {
  OpenGraph graph;
  /** Removed vertices, in ids of the original graph. */
  VertexSet removed;
  /** Original id of each vertex of the reduced graph. */
  std::vector<Vertex> original;
};

ReducedOpenGraph reduced_open_graph(
    const OpenGraph &g, const GFlow &ssf, const Flow &fl);

std::vector<Vertex> influencing_path(
    const Flow &fl, const GFlow &ssf, const OpenGraph &g, Vertex i, Vertex j);

nlohmann::json flow_to_json(const OpenGraph &g, const Flow &fl);
nlohmann::json gflow_to_json(const OpenGraph &g, const GFlow &gf);
Flow flow_from_json(const OpenGraph &g, const nlohmann::json &j);
GFlow gflow_from_json(const OpenGraph &g, const nlohmann::json &j);

}  // namespace mbqc
