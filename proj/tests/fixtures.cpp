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


#include "fixtures.hpp"

#include "mbqc/errors.hpp"
#include "mbqc/flow.hpp"

namespace fixtures {

OpenGraph line_graph() {
  return OpenGraph::from_labels(
      {1, 2, 3, 4, 5, 6, 7}, {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}},
      {1}, {7});
}

Circuit example1_circuit() {
  Circuit c = Circuit::on_wires(3);
  c.add(Gate::J(0, Angle(1, 4)));
  c.add(Gate::CZ(0, 1));
  c.add(Gate::J(1, Angle(1, 3)));
  c.add(Gate::CZ(0, 1));
  c.add(Gate::J(0, Angle(3, 5)));
  c.add(Gate::CZ(0, 1));
  c.add(Gate::CZ(0, 2));
  c.add(Gate::CZ(1, 2));
  c.add(Gate::J(1, Angle(2, 7)));
  c.add(Gate::CZ(1, 2));
  c.add(Gate::J(2, Angle(1, 6)));
  return c;
}

OpenGraph example1_graph() {
  return OpenGraph::from_labels(
      {1, 2, 3, 4, 5, 6, 7, 8},
      {{7, 8}, {6, 7}, {5, 7}, {5, 6}, {4, 5}, {3, 7}, {3, 5}, {2, 5}, {2, 4},
       {2, 3}, {1, 2}},
      {1, 4, 7}, {3, 6, 8});
}

Circuit example2_circuit() {
  Circuit c = Circuit::on_wires(2);
  c.add(Gate::J(0, Angle(1, 3)));
  c.add(Gate::CZ(0, 1));
  c.add(Gate::J(1, Angle(1, 5)));
  c.add(Gate::CZ(0, 1));
  c.add(Gate::J(0, Angle(-1, 2)));
  c.add(Gate::J(1, Angle(0, 1)));
  return c;
}

OpenGraph example2_graph() {
  return OpenGraph::from_labels(
      {1, 2, 3, 4, 5, 6}, {{5, 6}, {4, 5}, {2, 5}, {2, 4}, {2, 3}, {1, 2}},
      {1, 4}, {3, 6});
}

OpenGraph gflow_only_graph() {
  // Smallest hit of a deterministic scan over 2-input, 2-output graphs on
  // 5 vertices, edges enumerated as bitmasks in increasing order.
  const std::vector<std::pair<long, long>> pairs = {
      {1, 2}, {1, 3}, {1, 4}, {1, 5}, {2, 3},
      {2, 4}, {2, 5}, {3, 4}, {3, 5}, {4, 5}};
  for (unsigned mask = 1; mask < (1u << pairs.size()); ++mask) {
    std::vector<std::pair<long, long>> edges;
    for (unsigned b = 0; b < pairs.size(); ++b)
      if (mask >> b & 1) edges.push_back(pairs[b]);
    OpenGraph g = OpenGraph::from_labels({1, 2, 3, 4, 5}, edges, {1, 2}, {4, 5});
    if (!find_flow(g) && max_delayed_gflow(g)) return g;
  }
  throw InvariantError("no gflow-only graph on 5 vertices");
}

OpenGraph no_gflow_graph() {
  return OpenGraph::from_labels({1, 2, 3}, {{1, 3}}, {1, 2}, {3});
}

}  // namespace fixtures
