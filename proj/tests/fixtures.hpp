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

#include "mbqc/circuit.hpp"
#include "mbqc/graph.hpp"
#include "mbqc/pattern.hpp"

namespace fixtures {

using namespace mbqc;

/** 7-vertex path 1-2-...-7 with I={1}, O={7}. */
OpenGraph line_graph();

/** Three wire circuit whose pattern graph has 8 vertices. */
Circuit example1_circuit();
OpenGraph example1_graph();

/** Two wire circuit with measurement angles pi/2 on 2 and 0 on 5. */
Circuit example2_circuit();
OpenGraph example2_graph();

/** Open graph with a gflow but no causal flow. */
OpenGraph gflow_only_graph();

/** I={1,2}, O={3}, single edge 1-3: no gflow. */
OpenGraph no_gflow_graph();

}  // namespace fixtures
