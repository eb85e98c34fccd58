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

#include <boost/dynamic_bitset.hpp>
#include <json.hpp>
#include <string>
#include <utility>
#include <vector>

namespace mbqc {

using Vertex = unsigned;
using VertexSet = boost::dynamic_bitset<>;
using Edge = std::pair<Vertex, Vertex>;

/** Members of a set in ascending order. */
std::vector<Vertex> members(const VertexSet &s);

/**
 * Undirected graph with ordered input and output sequences.
 *
 * Vertices are dense ids 0..n-1. Each vertex carries an external label used
 * for serialization and diagnostics; by default the label equals the id.
 */
class OpenGraph {
 public:
  OpenGraph() = default;
  explicit OpenGraph(unsigned n);

  /**
   * Build from external labels. Ids are assigned by ascending label.
   */
  static OpenGraph from_labels(
      const std::vector<long> &labels,
      const std::vector<std::pair<long, long>> &edges,
      const std::vector<long> &inputs, const std::vector<long> &outputs);

  unsigned n_vertices() const { return static_cast<unsigned>(adj_.size()); }

  void add_edge(Vertex u, Vertex v);
  void remove_edge(Vertex u, Vertex v);
  bool has_edge(Vertex u, Vertex v) const;
  std::vector<Edge> edges() const;
  unsigned max_degree() const;

  const VertexSet &neighbors(Vertex v) const;
  VertexSet odd_neighborhood(const VertexSet &k) const;

  const std::vector<Vertex> &inputs() const { return inputs_; }
  const std::vector<Vertex> &outputs() const { return outputs_; }
  void set_inputs(const std::vector<Vertex> &in);
  void set_outputs(const std::vector<Vertex> &out);
  bool is_input(Vertex v) const { return input_set_.test(v); }
  bool is_output(Vertex v) const { return output_set_.test(v); }
  const VertexSet &input_set() const { return input_set_; }
  const VertexSet &output_set() const { return output_set_; }
  /** O^C */
  VertexSet non_outputs() const { return ~output_set_; }
  /** I^C */
  VertexSet non_inputs() const { return ~input_set_; }

  VertexSet empty_set() const { return VertexSet(n_vertices()); }
  VertexSet set_of(const std::vector<Vertex> &vs) const;

  long label(Vertex v) const;
  /** Id of an external label; throws InputError if unknown. */
  Vertex vertex_of(long label) const;
  const std::vector<long> &labels() const { return labels_; }
  void set_labels(const std::vector<long> &labels);

  /** Render a set with external labels, e.g. "{1,3}". */
  std::string format(const VertexSet &s) const;

  bool operator==(const OpenGraph &other) const;

 private:
  void check(Vertex v) const;

  std::vector<VertexSet> adj_;
  std::vector<Vertex> inputs_;
  std::vector<Vertex> outputs_;
  VertexSet input_set_;
  VertexSet output_set_;
  std::vector<long> labels_;
};

nlohmann::json graph_to_json(const OpenGraph &g);
OpenGraph graph_from_json(const nlohmann::json &j);

}  // namespace mbqc
