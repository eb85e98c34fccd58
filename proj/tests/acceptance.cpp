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


// Acceptance checks. One line per criterion, nonzero exit if any fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "mbqc/compactify.hpp"
#include "mbqc/flow.hpp"
#include "mbqc/pattern.hpp"
#include "mbqc/pipeline.hpp"
#include "mbqc/sim.hpp"
#include "oracles.hpp"

using namespace mbqc;

namespace {

constexpr double kTol = 1e-9;

int failures = 0;

void report(const std::string &id, bool ok, const std::string &what,
            const std::string &detail) {
  std::cout << (ok ? "PASS" : "FAIL") << "  " << id << "  " << what;
  if (!detail.empty()) std::cout << "  [" << detail << "]";
  std::cout << std::endl;
  if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string fmt_time(double s) {
  std::ostringstream os;
  os.precision(3);
  os << s << "s";
  return os.str();
}

// Pattern over `g` written with external labels, commands in time order.
struct Builder {
  const OpenGraph &g;
  Pattern p;
  explicit Builder(const OpenGraph &graph) : g(graph) {
    p.space = g;
    for (Vertex v : members(g.non_inputs())) p.commands.push_back(Command::N(v));
    for (const Edge &e : g.edges())
      p.commands.push_back(Command::E(e.first, e.second));
  }
  SignalSet dom(std::initializer_list<long> ls) const {
    SignalSet s;
    for (long l : ls) toggle(s, g.vertex_of(l));
    return s;
  }
  Builder &M(long q, Angle a, std::initializer_list<long> s = {}) {
    p.commands.push_back(Command::M(g.vertex_of(q), a, dom(s)));
    return *this;
  }
  Builder &X(long q, std::initializer_list<long> s) {
    p.commands.push_back(Command::X(g.vertex_of(q), dom(s)));
    return *this;
  }
  Builder &Z(long q, std::initializer_list<long> s) {
    p.commands.push_back(Command::Z(g.vertex_of(q), dom(s)));
    return *this;
  }
};

std::vector<std::string> terms(const Pattern &p) {
  std::vector<std::string> out;
  std::istringstream is(to_string(canonical(p)));
  for (std::string t; is >> t;) out.push_back(t);
  std::sort(out.begin(), out.end());
  return out;
}

std::string diff(const Pattern &got, const Pattern &want) {
  const auto a = terms(got), b = terms(want);
  std::vector<std::string> extra, missing;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(extra));
  std::set_difference(b.begin(), b.end(), a.begin(), a.end(),
                      std::back_inserter(missing));
  std::ostringstream os;
  for (const auto &t : extra) os << " +" << t;
  for (const auto &t : missing) os << " -" << t;
  return os.str();
}

std::string layers_str(const OpenGraph &g, const std::vector<unsigned> &layer,
                       bool descending) {
  const auto parts = layer_partition(layer);
  std::ostringstream os;
  if (descending) {
    for (std::size_t k = parts.size(); k-- > 1;)
      if (parts[k].any()) os << g.format(parts[k]);
  } else {
    for (std::size_t k = 1; k < parts.size(); ++k)
      if (parts[k].any()) os << g.format(parts[k]);
  }
  return os.str();
}

void criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  // The listing measures 1,3,5,6 and corrects 2,4,6,7.
  const OpenGraph g = OpenGraph::from_labels(
      {1, 2, 3, 4, 5, 6, 7}, {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}},
      {1, 3, 5}, {2, 4, 7});
  const Angle t1(1, 5), t3(2, 7), t5(3, 8), t6(5, 6);
  const AngleMap angles = {{g.vertex_of(1), t1},
                           {g.vertex_of(3), t3},
                           {g.vertex_of(5), t5},
                           {g.vertex_of(6), t6}};
  const Flow fl = *find_flow(g);
  const Pattern got = signal_shift(flow_pattern(fl, g, angles), fl);
  Builder want(g);
  want.M(1, t1).X(2, {1}).M(3, t3).X(4, {1, 3}).M(5, t5).X(6, {1, 3, 5})
      .M(6, t6).X(7, {6}).Z(7, {1, 3, 5});
  bool ok = terms(got) == terms(want.p);
  std::string detail = "I={1,3,5} O={2,4,7}:" +
                       (ok ? std::string(" exact") : diff(got, want.p));

  // The same path with a single input and output, against a hand derivation.
  const OpenGraph line = fixtures::line_graph();
  AngleMap la;
  for (Vertex v : members(line.non_outputs())) la[v] = Angle(1, 3 + v);
  const Flow lf = *find_flow(line);
  const Pattern lgot = signal_shift(flow_pattern(lf, line, la), lf);
  Builder lw(line);
  auto at = [&](long l) { return la.at(line.vertex_of(l)); };
  lw.M(1, at(1)).X(2, {1}).M(2, at(2)).X(3, {2}).M(3, at(3)).X(4, {1, 3})
      .M(4, at(4)).X(5, {2, 4}).M(5, at(5)).X(6, {1, 3, 5}).M(6, at(6))
      .X(7, {2, 4, 6}).Z(7, {1, 3, 5});
  const bool lok = terms(lgot) == terms(lw.p);
  ok = ok && lok;
  detail += "; I={1} O={7}:" + (lok ? std::string(" exact") : diff(lgot, lw.p));
  const double dt = seconds_since(t0);
  ok = ok && dt < 1.0;
  report("1", ok, "line graph signal shift matches the expected pattern",
         detail + "; " + fmt_time(dt) + " < 1s");
}

void criterion2() {
  const auto t0 = std::chrono::steady_clock::now();
  const Circuit c = fixtures::example1_circuit();
  const Pattern p = pattern_from_circuit(c);
  const OpenGraph g = graph_of(p);
  const OpenGraph ref = fixtures::example1_graph();
  const bool same_graph = g.edges() == ref.edges() && g.inputs() == ref.inputs() &&
                          g.outputs() == ref.outputs();
  const Flow fl = *find_flow(g);
  const GFlow ssf = ssf_from_flow(fl, g);
  const std::string flow_layers = layers_str(g, fl.layer, true);
  const std::string ssf_layers = layers_str(g, ssf.layer, true);
  const bool a = same_graph && fl.depth() == 5 &&
                 flow_layers == "{1}{4}{2}{5}{7}" && ssf.depth() == 2 &&
                 layers_str(g, measurement_rounds(g, ssf), false) ==
                     "{1,4,7}{2,5}";
  report("2a", a, "example 1 flow depth 5 and SSF depth 2",
         "flow " + flow_layers + ", SSF rounds " +
             layers_str(g, measurement_rounds(g, ssf), false));

  const AngleMap angles = angles_of(p);
  auto th = [&](long l) { return angles.at(g.vertex_of(l)); };
  const Pattern shifted = signal_shift(flow_pattern(fl, g, angles), fl);
  Builder want(g);
  want.M(1, th(1)).M(4, th(4)).M(7, th(7))
      .X(2, {1}).X(3, {1}).X(5, {1}).Z(6, {1})
      .X(5, {4}).X(6, {4}).X(3, {4}).Z(3, {4}).Z(6, {4}).X(8, {4})
      .X(8, {7})
      .M(2, th(2)).M(5, th(5))
      .X(3, {2}).X(6, {2}).X(6, {5}).X(8, {5});
  const bool b_exact = terms(shifted) == terms(want.p);
  // Z8^s1, X8^s6 and Z6^s5 in place of Z6^s1, X8^s5 and X6^s5, no X8^s4.
  Builder listed(g);
  listed.M(1, th(1)).M(4, th(4)).M(7, th(7))
      .X(2, {1}).X(3, {1}).X(5, {1}).Z(8, {1})
      .X(5, {4}).X(3, {4}).X(6, {4}).Z(3, {4}).Z(6, {4})
      .X(8, {7})
      .M(2, th(2)).M(5, th(5))
      .X(3, {2}).X(6, {2}).Z(6, {5}).X(8, {6});
  bool listed_det = true;
  try {
    listed_det = is_strongly_deterministic(listed.p);
  } catch (const std::exception &) {
    listed_det = false;
  }
  report("2b", b_exact && !listed_det,
         "example 1 signal shifted pattern matches the expected multiset",
         std::string(b_exact ? "exact" : diff(shifted, want.p)) +
             "; variant listing deterministic: " +
             (listed_det ? "yes" : "no"));

  const Circuit ext = extended_translation(shifted, ssf, fl);
  bool c_ok = false, d_ok = false;
  std::string c_detail, d_detail;
  try {
    const CompactifyResult r = compactify(ext, g, fl, ssf);
    const CircuitStats st = circuit_stats(r.circuit);
    c_ok = ext.wires.size() == 8 && st.wires == 3 && st.jlayers == 2;
    c_detail = "wires " + std::to_string(ext.wires.size()) + "→" +
               std::to_string(st.wires) + ", J layers " +
               std::to_string(st.jlayers);
    const Matrix me = circuit_map(ext, kTol);
    const Matrix mc = circuit_map(r.circuit, kTol);
    const Matrix mu = circuit_unitary(c);
    d_ok = equivalent_up_to_phase(me, mc, kTol) &&
           equivalent_up_to_phase(mu, mc, kTol);
    d_detail = "extended vs compact vs input, tol 1e-9";
  } catch (const std::exception &e) {
    c_detail = e.what();
  }
  report("2c", c_ok, "example 1 compactifies to 3 wires and 2 J layers",
         c_detail);
  const double dt = seconds_since(t0);
  report("2d", d_ok && dt < 10.0,
         "example 1 extended and compact maps agree up to phase",
         d_detail + "; " + fmt_time(dt) + " < 10s");
}

void criterion3() {
  const Circuit c = fixtures::example2_circuit();
  const Pattern p = pattern_from_circuit(c);
  const OpenGraph g = graph_of(p);
  const Flow fl = *find_flow(g);
  const Pattern shifted = signal_shift(flow_pattern(fl, g, angles_of(p)), fl);
  const AngleMap angles = angles_of(p);
  auto th = [&](long l) { return angles.at(g.vertex_of(l)); };
  const bool pauli_angles =
      th(2) == Angle(1, 2) && th(5) == Angle(0, 1);

  Builder half(g);
  half.M(1, th(1)).M(2, th(2)).M(4, th(4)).M(5, th(5), {1, 4})
      .X(3, {2, 4}).Z(3, {1}).X(6, {1, 5}).Z(6, {1, 4});
  Builder zero(g);
  zero.M(1, th(1)).M(4, th(4)).M(5, th(5)).M(2, th(2), {1})
      .X(3, {1, 2, 4}).Z(3, {1}).X(6, {1, 5}).Z(6, {1, 4});
  Builder both(g);
  both.M(1, th(1)).M(2, th(2)).M(4, th(4)).M(5, th(5))
      .X(3, {2, 4}).Z(3, {1}).X(6, {1, 5}).Z(6, {1, 4});
  // Listed with X3^{s1+s2+s4}; the half-pi rule removes s1 from that domain.
  Builder both_listed(g);
  both_listed.M(1, th(1)).M(2, th(2)).M(4, th(4)).M(5, th(5))
      .X(3, {1, 2, 4}).Z(3, {1}).X(6, {1, 5}).Z(6, {1, 4});

  const Pattern ph = pauli_simplify(shifted, kHalfPiRule);
  const Pattern pz = pauli_simplify(shifted, kZeroRule);
  const Pattern pb = pauli_simplify(shifted, kHalfPiRule | kZeroRule);
  const bool h = terms(ph) == terms(half.p);
  const bool z = terms(pz) == terms(zero.p);
  const bool b = terms(pb) == terms(both.p);
  const std::string hl = layers_str(g, pattern_rounds(ph), false);
  const std::string zl = layers_str(g, pattern_rounds(pz), false);
  const std::string bl = layers_str(g, pattern_rounds(pb), false);
  const Matrix ref = pattern_map(shifted);
  // The all-zero branch cannot tell the listings apart; the s1 = 1 branches can.
  const bool listed_equal = is_strongly_deterministic(both_listed.p) &&
      equivalent_up_to_phase(ref, pattern_map(both_listed.p), kTol);
  const bool all_equal = is_strongly_deterministic(ph) &&
                         is_strongly_deterministic(pz) &&
                         is_strongly_deterministic(pb) &&
                         equivalent_up_to_phase(ref, pattern_map(ph), kTol) &&
                         equivalent_up_to_phase(ref, pattern_map(pz), kTol) &&
                         equivalent_up_to_phase(ref, pattern_map(pb), kTol);
  const bool ok = pauli_angles && h && z && b && hl == "{1,2,4}{5}" &&
                  zl == "{1,4,5}{2}" && bl == "{1,2,4,5}" && all_equal &&
                  !listed_equal;
  std::ostringstream d;
  d << "halfpi " << (h ? "exact" : diff(ph, half.p)) << " " << hl << "; zero "
    << (z ? "exact" : diff(pz, zero.p)) << " " << zl << "; both "
    << (b ? "exact" : diff(pb, both.p)) << " " << bl
    << "; X3^{s1+s2+s4} variant equivalent: " << (listed_equal ? "yes" : "no");
  report("3", ok, "example 2 Pauli rules give the expected dependencies",
         d.str());
}

struct Corpus {
  std::vector<OpenGraph> graphs;
  std::vector<Flow> flows;
  std::vector<GFlow> ssfs;
};

Corpus flow_corpus(unsigned count, unsigned max_n, unsigned seed) {
  std::mt19937 rng(seed);
  Corpus c;
  while (c.graphs.size() < count) {
    OpenGraph g = oracles::random_flow_graph(rng, max_n);
    if (g.inputs().size() != g.outputs().size()) continue;
    const Flow fl = *find_flow(g);
    c.ssfs.push_back(ssf_from_flow(fl, g));
    c.flows.push_back(fl);
    c.graphs.push_back(std::move(g));
  }
  return c;
}

void criterion4and5() {
  const auto t0 = std::chrono::steady_clock::now();
  const Corpus corpus = flow_corpus(200, 12, 20240601);
  unsigned opt_bad = 0, brute_checked = 0, brute_bad = 0, axiom_bad = 0;
  for (std::size_t k = 0; k < corpus.graphs.size(); ++k) {
    const OpenGraph &g = corpus.graphs[k];
    const GFlow &ssf = corpus.ssfs[k];
    const auto mdg = max_delayed_gflow(g);
    if (!mdg || layer_partition(mdg->layer) != layer_partition(ssf.layer))
      ++opt_bad;
    if (g.n_vertices() <= 7 && mdg) {
      ++brute_checked;
      const auto all = oracles::brute_gflow_layerings(g);
      unsigned best = ~0u;
      bool dominated = true, contains = false;
      const unsigned top = static_cast<unsigned>(g.n_vertices());
      const auto mine = oracles::cumulative_sizes(mdg->layer, top);
      for (const auto &l : all) {
        best = std::min(best, *std::max_element(l.begin(), l.end()));
        const auto cs = oracles::cumulative_sizes(l, top);
        for (unsigned i = 0; i <= top; ++i)
          if (cs[i] > mine[i]) dominated = false;
        if (l == mdg->layer) contains = true;
      }
      if (all.empty() || best != mdg->depth() || !dominated || !contains)
        ++brute_bad;
    }
    if (!verify_gflow(g, ssf).empty()) ++axiom_bad;
    for (Vertex i : members(g.non_outputs())) {
      VertexSet odd = g.odd_neighborhood(ssf.g[i]) & g.non_outputs();
      VertexSet self = g.empty_set();
      self.set(i);
      if (odd != self) {
        ++axiom_bad;
        break;
      }
    }
  }
  const double dt = seconds_since(t0);
  std::ostringstream d;
  d << opt_bad << " partition mismatches in " << corpus.graphs.size()
    << "; brute force " << brute_bad << " mismatches in " << brute_checked
    << " graphs with n<=7; " << fmt_time(dt) << " < 60s";
  report("4", opt_bad == 0 && brute_bad == 0 && brute_checked > 0 && dt < 60.0,
         "SSF layering equals the maximally delayed gflow", d.str());
  report("5", axiom_bad == 0,
         "every SSF satisfies the gflow axioms and Odd(s(i)) minus O = {i}",
         std::to_string(axiom_bad) + " failures in " +
             std::to_string(corpus.graphs.size()));
}

void criterion6() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937 rng(6);
  unsigned bad = 0, aborts = 0;
  std::string first;
  unsigned worst_depth = 0, worst_bound = 0;
  for (int t = 0; t < 100; ++t) {
    const Circuit c = oracles::random_circuit(rng, 3, 6, 4);
    try {
      const PipelineResult r = optimize(c);
      const PipelineReport &rep = r.report;
      const unsigned bound =
          rep.ssf_depth * 4 * std::max(1u, rep.max_degree);
      const bool ok =
          rep.compact && rep.wires_out == c.wires.size() &&
          rep.jlayers_out == rep.ssf_depth && rep.depth_out <= bound &&
          equivalent_up_to_phase(circuit_unitary(c), circuit_map(r.output, kTol),
                                 kTol);
      if (rep.depth_out * std::max(1u, worst_bound) >
          worst_depth * std::max(1u, bound)) {
        worst_depth = rep.depth_out;
        worst_bound = bound;
      }
      if (!ok) {
        ++bad;
        if (first.empty()) first = "case " + std::to_string(t);
      }
    } catch (const CompactifyAbort &e) {
      ++aborts;
      if (first.empty()) first = e.what();
    } catch (const std::exception &e) {
      ++bad;
      if (first.empty()) first = e.what();
    }
  }
  const double dt = seconds_since(t0);
  std::ostringstream d;
  d << bad << " failures, " << aborts << " aborts in 100; tightest depth "
    << worst_depth << " <= " << worst_bound << "; " << fmt_time(dt)
    << " < 120s";
  if (!first.empty()) d << "; first: " << first;
  report("6", bad == 0 && aborts == 0 && dt < 120.0,
         "random circuits round trip to compact equivalent circuits", d.str());
}

void criterion7() {
  const Corpus corpus = flow_corpus(50, 10, 7);
  unsigned bad = 0, pairs = 0;
  for (std::size_t k = 0; k < corpus.graphs.size(); ++k) {
    const OpenGraph &g = corpus.graphs[k];
    const auto table = zpath_parities(corpus.flows[k], g);
    const auto counts = oracles::zpath_counts(g, corpus.flows[k]);
    for (Vertex i = 0; i < g.n_vertices(); ++i)
      for (Vertex j = 0; j < g.n_vertices(); ++j) {
        ++pairs;
        if (table.parity(i, j) != (counts[i][j] % 2 == 1)) ++bad;
      }
  }
  report("7", bad == 0, "Z-path parities agree with exhaustive path counting",
         std::to_string(bad) + " mismatches over " + std::to_string(pairs) +
             " ordered pairs in 50 graphs");
}

void criterion8() {
  const BenchResult b = bench_ssf("path", {50, 100, 200, 400});
  std::ostringstream d;
  d.precision(3);
  for (const BenchPoint &pt : b.points)
    d << "n=" << pt.n << ":" << pt.seconds * 1e6 << "us ";
  d << "exponent " << b.exponent << " <= 3.5";
  report("8", b.exponent <= 3.5, "SSF construction scales polynomially",
         d.str());
}

}  // namespace

int main() {
  const std::vector<std::pair<const char *, std::function<void()>>> all = {
      {"1", criterion1},     {"2", criterion2}, {"3", criterion3},
      {"4", criterion4and5}, {"6", criterion6}, {"7", criterion7},
      {"8", criterion8}};
  for (const auto &[id, run] : all) {
    try {
      run();
    } catch (const std::exception &e) {
      report(id, false, "raised an exception", e.what());
    }
  }
  std::cout << (failures ? "FAILED " : "ALL PASSED ") << failures
            << " failing" << std::endl;
  return failures ? 1 : 0;
}
