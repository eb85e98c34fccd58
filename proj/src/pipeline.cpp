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


#include "mbqc/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

namespace mbqc {

Circuit relabel_wires(const Circuit &c, const std::map<Wire, Wire> &to) {
  auto m = [&](Wire w) {
    auto it = to.find(w);
    if (it == to.end()) throw InputError("no label for wire " + std::to_string(w));
    return it->second;
  };
  Circuit r;
  for (Wire w : c.wires) {
    r.wires.push_back(m(w));
    r.initial[m(w)] = c.initial.at(w);
  }
  for (Wire w : c.measured) r.measured.insert(m(w));
  for (Wire w : c.inputs) r.inputs.push_back(m(w));
  for (Wire w : c.outputs) r.outputs.push_back(m(w));
  for (Gate g : c.gates) {
    g.a = m(g.a);
    if (g.two_qubit()) g.b = m(g.b);
    if (g.kind == GateKind::E && g.a > g.b) std::swap(g.a, g.b);
    g.tag.owner = kNoVertex;
    g.origin.reset();
    r.gates.push_back(g);
  }
  return r;
}

PipelineResult optimize(const Circuit &c, const PipelineOptions &opts) {
  c.validate();
  if (!c.measured.empty() || c.inputs.size() != c.wires.size())
    throw InputError("input circuit must be unitary on its wires");
  PipelineResult r;
  r.input = c;
  r.pattern = pattern_from_circuit(c);
  r.graph = graph_of(r.pattern);
  const OpenGraph &g = r.graph;
  const auto fl = find_flow(g);
  if (!fl) throw InputError("graph of the circuit has no flow");
  r.flow = *fl;
  r.ssf = ssf_from_flow(r.flow, g);
  const AngleMap angles = angles_of(r.pattern);
  r.flow_pattern = flow_pattern(r.flow, g, angles);
  r.shifted = signal_shift(r.flow_pattern, r.flow);
  r.final_pattern =
      opts.pauli_rules ? pauli_simplify(r.shifted, opts.pauli_rules) : r.shifted;
  const GFlow used = opts.pauli_rules ? gflow_of(r.final_pattern) : r.ssf;
  r.extended = extended_translation(r.final_pattern, used, r.flow);
  CompactifyOptions co;
  co.partial = opts.pauli_rules != 0;
  r.compact = compactify(r.extended, g, r.flow, used, co);

  const Circuit &out = r.compact.circuit;
  PipelineReport &rep = r.report;
  rep.compact = out.wires.size() == c.inputs.size() &&
                r.compact.aborted == 0 && r.compact.skipped_blocks == 0;
  if (out.inputs.size() == c.inputs.size() && rep.compact) {
    std::map<Wire, Wire> to;
    for (std::size_t k = 0; k < out.inputs.size(); ++k)
      to[out.inputs[k]] = c.inputs[k];
    r.output = relabel_wires(out, to);
  } else {
    r.output = out;
  }
  const CircuitStats in_stats = circuit_stats(c);
  const CircuitStats out_stats = circuit_stats(r.output);
  rep.wires_in = static_cast<unsigned>(c.wires.size());
  rep.extended_wires = static_cast<unsigned>(r.extended.wires.size());
  rep.wires_out = out_stats.wires;
  rep.flow_depth = r.flow.depth();
  rep.ssf_depth = r.ssf.depth();
  rep.pattern_depth = pattern_depth(r.final_pattern);
  rep.depth_in = in_stats.depth;
  rep.depth_out = out_stats.depth;
  rep.jlayers_out = out_stats.jlayers;
  rep.max_degree = g.max_degree();
  rep.aborted = r.compact.aborted;
  rep.skipped_blocks = r.compact.skipped_blocks;
  return r;
}

std::vector<StageCheck> verify_pipeline(const PipelineResult &r, double tol) {
  std::vector<StageCheck> out;
  const Matrix ref = circuit_map(r.input, tol);
  auto check = [&](const std::string &stage, auto &&compute) {
    StageCheck s{stage, false, ""};
    try {
      s.ok = equivalent_up_to_phase(ref, compute(), tol);
      if (!s.ok) s.detail = "map differs from the input circuit";
    } catch (const std::exception &e) {
      s.detail = e.what();
    }
    out.push_back(std::move(s));
  };
  check("pattern", [&] { return pattern_map(r.pattern); });
  check("flow_pattern", [&] { return pattern_map(r.flow_pattern); });
  check("shifted", [&] { return pattern_map(r.shifted); });
  if (r.final_pattern.commands != r.shifted.commands)
    check("pauli", [&] { return pattern_map(r.final_pattern); });
  check("extended", [&] { return circuit_map(r.extended, tol); });
  check("compact", [&] { return circuit_map(r.output, tol); });
  StageCheck det{"determinism", false, ""};
  try {
    det.ok = is_strongly_deterministic(r.final_pattern, tol);
    if (!det.ok) det.detail = "branches differ";
  } catch (const std::exception &e) {
    det.detail = e.what();
  }
  out.push_back(std::move(det));
  return out;
}

nlohmann::json report_to_json(const PipelineReport &r) {
  return {{"wires_in", r.wires_in},
          {"extended_wires", r.extended_wires},
          {"wires_out", r.wires_out},
          {"flow_depth", r.flow_depth},
          {"ssf_depth", r.ssf_depth},
          {"pattern_depth", r.pattern_depth},
          {"circuit_depth_in", r.depth_in},
          {"circuit_depth_out", r.depth_out},
          {"jlayers_out", r.jlayers_out},
          {"max_degree", r.max_degree},
          {"aborted", r.aborted},
          {"skipped_blocks", r.skipped_blocks},
          {"compact", r.compact}};
}

std::string report_to_text(const PipelineReport &r) {
  std::ostringstream os;
  os << "flow depth " << r.flow_depth << ", SSF depth " << r.ssf_depth
     << ", wires " << r.extended_wires << "→" << r.wires_out << "\n"
     << "pattern depth " << r.pattern_depth << ", J layers " << r.jlayers_out
     << ", circuit depth " << r.depth_in << "→" << r.depth_out
     << ", deg(G) " << r.max_degree << "\n";
  if (!r.compact)
    os << "not compact: " << r.aborted << " aborted procedures, "
       << r.skipped_blocks << " skipped blocks\n";
  return os.str();
}

OpenGraph bench_graph(const std::string &kind, unsigned n) {
  std::vector<long> labels;
  std::vector<std::pair<long, long>> edges;
  if (kind == "path") {
    if (n < 2) throw InputError("path needs at least two vertices");
    for (long v = 1; v <= static_cast<long>(n); ++v) labels.push_back(v);
    for (long v = 1; v < static_cast<long>(n); ++v) edges.emplace_back(v, v + 1);
    return OpenGraph::from_labels(labels, edges, {1}, {static_cast<long>(n)});
  }
  if (kind == "grid") {
    const long rows = std::max(1L, std::lround(std::sqrt(n / 4.0)));
    const long cols = std::max(2L, static_cast<long>(n) / rows);
    auto id = [&](long r, long c) { return r * cols + c + 1; };
    std::vector<long> in, out;
    for (long r = 0; r < rows; ++r) {
      for (long c = 0; c < cols; ++c) {
        labels.push_back(id(r, c));
        if (c + 1 < cols) edges.emplace_back(id(r, c), id(r, c + 1));
        if (r + 1 < rows) edges.emplace_back(id(r, c), id(r + 1, c));
      }
      in.push_back(id(r, 0));
      out.push_back(id(r, cols - 1));
    }
    return OpenGraph::from_labels(labels, edges, in, out);
  }
  throw InputError("unknown bench graph " + kind + " (path, grid)");
}

BenchResult bench_ssf(const std::string &kind, const std::vector<unsigned> &sizes,
                      double min_seconds) {
  using Clock = std::chrono::steady_clock;
  if (sizes.size() < 2) throw InputError("bench needs at least two sizes");
  BenchResult res;
  std::vector<double> xs, ys;
  for (unsigned n : sizes) {
    const OpenGraph g = bench_graph(kind, n);
    const auto fl = find_flow(g);
    if (!fl) throw InvariantError("bench graph has no flow");
    double best = 1e300;
    for (int rep = 0; rep < 3; ++rep) {
      unsigned iters = 0;
      double elapsed = 0;
      const auto t0 = Clock::now();
      do {
        const GFlow s = ssf_from_flow(*fl, g);
        if (s.g.size() != g.n_vertices()) throw InvariantError("bad SSF size");
        ++iters;
        elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
      } while (elapsed < min_seconds);
      best = std::min(best, elapsed / iters);
    }
    res.points.push_back({g.n_vertices(), best});
    xs.push_back(std::log(static_cast<double>(g.n_vertices())));
    ys.push_back(std::log(best));
  }
  const double k = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / k;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / k;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  res.exponent = sxy / sxx;
  return res;
}

}  // namespace mbqc
