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

#include "mbqc/circuit.hpp"
#include "mbqc/compactify.hpp"
#include "mbqc/flow.hpp"
#include "mbqc/graph.hpp"
#include "mbqc/pattern.hpp"
#include "mbqc/sim.hpp"

namespace mbqc {

struct PipelineOptions {
  /** Pauli rules to apply after signal shifting; 0 disables. */
  unsigned pauli_rules = 0;
};

struct PipelineReport {
  unsigned wires_in = 0;
  unsigned extended_wires = 0;
  unsigned wires_out = 0;
  unsigned flow_depth = 0;
  unsigned ssf_depth = 0;
  /** Depth of the pattern handed to the extended translation. */
  unsigned pattern_depth = 0;
  unsigned depth_in = 0;
  unsigned depth_out = 0;
  unsigned jlayers_out = 0;
  unsigned max_degree = 0;
  unsigned aborted = 0;
  unsigned skipped_blocks = 0;
  bool compact = false;
};

struct PipelineResult {
  Circuit input;
  Pattern pattern;
  OpenGraph graph;
  Flow flow;
  GFlow ssf;
  Pattern flow_pattern;
  Pattern shifted;
  /** Shifted pattern after the requested Pauli rules. */
  Pattern final_pattern;
  Circuit extended;
  CompactifyResult compact;
  /** Compact circuit on the wire labels of the input. */
  Circuit output;
  PipelineReport report;
};

/** Throws InputError when the graph of the input has no flow. */
PipelineResult optimize(const Circuit &c, const PipelineOptions &opts = {});

struct StageCheck {
  std::string stage;
  bool ok = false;
  std::string detail;
};

/** Compares every stage with the input circuit by simulation. */
std::vector<StageCheck> verify_pipeline(
    const PipelineResult &r, double tol = kEquivTolerance);

nlohmann::json report_to_json(const PipelineReport &r);
std::string report_to_text(const PipelineReport &r);

struct BenchPoint {
  unsigned n = 0;
  double seconds = 0;
};

struct BenchResult {
  std::vector<BenchPoint> points;
  /** Least squares slope of log time against log n. */
  double exponent = 0;
};

/** "path": 1-2-...-n with I={1}, O={n}. "grid": rows x cols, left to right. */
OpenGraph bench_graph(const std::string &kind, unsigned n);

/** Best of three timings of ssf_from_flow per size. */
BenchResult bench_ssf(const std::string &kind, const std::vector<unsigned> &sizes,
                      double min_seconds = 0.05);

/** Maps wire `w` to `to[w]`; drops slice owners and edge origins. */
Circuit relabel_wires(const Circuit &c, const std::map<Wire, Wire> &to);

}  // namespace mbqc
