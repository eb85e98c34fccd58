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


#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <numeric>
#include <random>
#include <sstream>

#include "mbqc/compactify.hpp"
#include "mbqc/errors.hpp"
#include "mbqc/pipeline.hpp"
#include "mbqc/sim.hpp"

using namespace mbqc;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kInputError = 2, kInvariant = 3 };

struct Args {
  std::string in;
  std::string out;
  std::string against;
  std::string trace;
  std::string report = "text";
  std::string pauli;
  std::string graph_kind = "path";
  std::vector<unsigned> sizes = {50, 100, 200, 400};
  double max_exponent = 3.5;
  unsigned seed = 0;
  bool seeded = false;
  bool verify = false;
  bool dump_state = false;
  bool strict = false;
  bool partial = false;
};

json read_json(const std::string &path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot read " + path);
  try {
    return json::parse(f);
  } catch (const json::parse_error &e) {
    throw InputError("malformed JSON in " + path + ": " + e.what());
  }
}

void write_json(const std::string &path, const json &j) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream f(path);
  if (!f) throw InputError("cannot write " + path);
  f << j.dump(2) << "\n";
}

unsigned pauli_rules(const std::string &s) {
  if (s.empty()) return 0;
  if (s == "both") return kHalfPiRule | kZeroRule;
  if (s == "halfpi") return kHalfPiRule;
  if (s == "zero") return kZeroRule;
  throw InputError("unknown Pauli rule set " + s + " (halfpi, zero, both)");
}

std::string format_sets(const OpenGraph &g, const std::vector<unsigned> &layer) {
  std::ostringstream os;
  const auto parts = layer_partition(layer);
  bool first = true;
  for (std::size_t k = parts.size(); k-- > 1;) {
    if (parts[k].none()) continue;
    os << (first ? "" : " ") << g.format(parts[k]);
    first = false;
  }
  return first ? "{}" : os.str();
}

json layers_json(const OpenGraph &g, const std::vector<unsigned> &layer) {
  json a = json::array();
  const auto parts = layer_partition(layer);
  for (std::size_t k = parts.size(); k-- > 1;) {
    if (parts[k].none()) continue;
    json l = json::array();
    for (Vertex v : members(parts[k])) l.push_back(g.label(v));
    a.push_back(l);
  }
  return a;
}

void dump_state(const Circuit &c) {
  const StateVector st = run_circuit(c, 0);
  std::cerr << "state of the output circuit on |0...0>:\n";
  const auto &amp = st.amplitudes();
  for (std::size_t i = 0; i < amp.size(); ++i)
    if (std::abs(amp[i]) > kNormTolerance)
      std::cerr << "  " << i << ": " << std::setprecision(12) << amp[i].real()
                << (amp[i].imag() < 0 ? " - " : " + ") << std::abs(amp[i].imag())
                << "i\n";
}

int cmd_optimize(const Args &a) {
  PipelineOptions opts;
  opts.pauli_rules = pauli_rules(a.pauli);
  if (opts.pauli_rules && a.strict)
    throw InputError(
        "--pauli conflicts with --strict: Pauli rules change the correction "
        "structure, so some ancilla wires cannot be removed");
  const Circuit c = circuit_from_json(read_json(a.in));
  const PipelineResult r = optimize(c, opts);
  if (a.strict && !r.report.compact)
    throw InvariantError("result is not compact");
  int status = kOk;
  json rep = report_to_json(r.report);
  if (a.verify) {
    json checks = json::array();
    for (const StageCheck &s : verify_pipeline(r)) {
      checks.push_back({{"stage", s.stage}, {"ok", s.ok}, {"detail", s.detail}});
      if (!s.ok) status = kVerifyFailed;
    }
    rep["verify"] = checks;
  }
  if (!a.out.empty())
    write_json(a.out, circuit_to_json(r.output,
                                      r.report.compact ? nullptr : &r.graph));
  if (!a.trace.empty())
    write_json(a.trace, trace_to_json(r.compact.trace, &r.graph));
  if (a.report == "json") {
    std::cout << rep.dump(2) << "\n";
  } else {
    std::cout << report_to_text(r.report);
    if (a.verify)
      for (const auto &s : rep["verify"])
        std::cout << "verify " << s["stage"].get<std::string>() << ": "
                  << (s["ok"].get<bool>() ? "ok" : "FAILED " +
                                                       s["detail"].get<std::string>())
                  << "\n";
  }
  if (a.dump_state) dump_state(r.output);
  return status;
}

int cmd_gflow(const Args &a) {
  const OpenGraph g = graph_from_json(read_json(a.in));
  const auto fl = find_flow(g);
  const auto mdg = max_delayed_gflow(g);
  json rep;
  std::ostringstream os;
  if (fl) {
    const GFlow ssf = ssf_from_flow(*fl, g);
    json f = json::object(), s = json::object();
    os << "flow:";
    for (Vertex v : members(g.non_outputs())) {
      const Vertex fv = static_cast<Vertex>(fl->f[v]);
      f[std::to_string(g.label(v))] = g.label(fv);
      os << " f(" << g.label(v) << ")=" << g.label(fv);
      json sj = json::array();
      for (Vertex u : members(ssf.g[v])) sj.push_back(g.label(u));
      s[std::to_string(g.label(v))] = sj;
    }
    os << "\nflow depth " << fl->depth() << ", layers "
       << format_sets(g, fl->layer) << "\n";
    os << "SSF correcting sets:";
    for (Vertex v : members(g.non_outputs()))
      os << " s(" << g.label(v) << ")=" << g.format(ssf.g[v]);
    os << "\nSSF depth " << ssf.depth() << ", layers "
       << format_sets(g, ssf.layer) << "\n";
    const bool optimal =
        mdg && layer_partition(mdg->layer) == layer_partition(ssf.layer);
    if (mdg)
      os << "max-delayed gflow depth " << mdg->depth() << ", layers "
         << format_sets(g, mdg->layer) << "\n";
    os << "optimal: " << (optimal ? "yes" : "no") << "\n";
    rep = {{"flow", f},
           {"flow_depth", fl->depth()},
           {"flow_layers", layers_json(g, fl->layer)},
           {"ssf", s},
           {"ssf_depth", ssf.depth()},
           {"ssf_layers", layers_json(g, ssf.layer)},
           {"optimal", optimal}};
    if (mdg) rep["gflow_layers"] = layers_json(g, mdg->layer);
  } else if (mdg) {
    os << "no flow; gflow layers: " << format_sets(g, mdg->layer)
       << " (depth " << mdg->depth() << ")\n";
    rep = {{"flow", nullptr},
           {"gflow_layers", layers_json(g, mdg->layer)},
           {"gflow_depth", mdg->depth()}};
  } else {
    os << "no flow, no gflow\n";
    rep = {{"flow", nullptr}, {"gflow_layers", nullptr}};
  }
  if (a.report == "json")
    std::cout << rep.dump(2) << "\n";
  else
    std::cout << os.str();
  return kOk;
}

struct Loaded {
  Pattern pattern;
  Flow flow;
};

// A pattern file is used as is; a circuit is translated into its flow pattern.
Loaded load_flow_pattern(const json &j) {
  Loaded l;
  if (j.contains("commands")) {
    l.pattern = pattern_from_json(j);
  } else {
    const Pattern p = pattern_from_circuit(circuit_from_json(j));
    const OpenGraph g = graph_of(p);
    const auto fl = find_flow(g);
    if (!fl) throw InputError("graph of the circuit has no flow");
    l.pattern = flow_pattern(*fl, g, angles_of(p));
  }
  const auto fl = find_flow(graph_of(l.pattern));
  if (!fl) throw InputError("graph of the pattern has no flow");
  l.flow = *fl;
  return l;
}

int cmd_shift(const Args &a) {
  const Loaded l = load_flow_pattern(read_json(a.in));
  std::mt19937 rng(a.seed);
  Pattern p = signal_shift(l.pattern, l.flow, a.seeded ? &rng : nullptr);
  if (const unsigned rules = pauli_rules(a.pauli)) p = pauli_simplify(p, rules);
  write_json(a.out, pattern_to_json(p));
  std::cerr << "pattern depth " << pattern_depth(l.pattern) << " -> "
            << pattern_depth(p) << "\n";
  return kOk;
}

int cmd_extend(const Args &a) {
  const json j = read_json(a.in);
  Pattern p;
  Flow fl;
  if (j.contains("commands")) {
    p = pattern_from_json(j);
    const auto f = find_flow(graph_of(p));
    if (!f) throw InputError("graph of the pattern has no flow");
    fl = *f;
  } else {
    const Loaded l = load_flow_pattern(j);
    p = signal_shift(l.pattern, l.flow);
    fl = l.flow;
  }
  const Circuit c = extended_translation(p, gflow_of(p), fl);
  const OpenGraph g = graph_of(p);
  write_json(a.out, circuit_to_json(c, &g));
  return kOk;
}

int cmd_compactify(const Args &a) {
  const ExtendedInput x = recover_extended(circuit_from_json(read_json(a.in)));
  CompactifyOptions opts;
  opts.partial = a.partial;
  CompactifyResult r;
  try {
    r = compactify(x.circuit, x.graph, x.flow, x.ssf, opts);
  } catch (const CompactifyAbort &e) {
    if (!a.trace.empty()) write_json(a.trace, trace_to_json(e.trace(), &x.graph));
    throw;
  }
  if (!a.trace.empty()) write_json(a.trace, trace_to_json(r.trace, &x.graph));
  write_json(a.out, circuit_to_json(r.circuit, &x.graph));
  const CircuitStats st = circuit_stats(r.circuit);
  std::cerr << "wires " << x.circuit.wires.size() << "→" << st.wires
            << ", J layers " << st.jlayers << "\n";
  if (a.verify) {
    const bool ok = equivalent_up_to_phase(circuit_map(x.circuit),
                                           circuit_map(r.circuit));
    std::cerr << "verify: " << (ok ? "ok" : "FAILED") << "\n";
    if (!ok) return kVerifyFailed;
  }
  if (a.dump_state) dump_state(r.circuit);
  return kOk;
}

Matrix map_of(const json &j) {
  if (j.contains("commands")) return pattern_map(pattern_from_json(j));
  return circuit_map(circuit_from_json(j));
}

int cmd_verify(const Args &a) {
  const json j = read_json(a.in);
  if (a.against.empty()) {
    // One file: a circuit is checked end to end, a pattern for determinism.
    if (j.contains("commands")) {
      const bool ok = is_strongly_deterministic(pattern_from_json(j));
      std::cout << "strongly deterministic: " << (ok ? "yes" : "no") << "\n";
      return ok ? kOk : kVerifyFailed;
    }
    Args b = a;
    b.verify = true;
    b.out.clear();
    return cmd_optimize(b);
  }
  const bool ok = equivalent_up_to_phase(map_of(j), map_of(read_json(a.against)));
  std::cout << "equivalent up to phase: " << (ok ? "yes" : "no") << "\n";
  return ok ? kOk : kVerifyFailed;
}

int cmd_bench(const Args &a) {
  const BenchResult b = bench_ssf(a.graph_kind, a.sizes);
  json rows = json::array();
  for (const BenchPoint &pt : b.points)
    rows.push_back({{"n", pt.n}, {"seconds", pt.seconds}});
  const double slope = b.exponent;
  const bool ok = slope <= a.max_exponent;
  if (a.report == "json") {
    std::cout << json{{"graph", a.graph_kind},
                      {"timings", rows},
                      {"exponent", slope},
                      {"max_exponent", a.max_exponent},
                      {"ok", ok}}
                     .dump(2)
              << "\n";
  } else {
    for (const auto &r : rows)
      std::cout << "n=" << r["n"] << " " << r["seconds"].get<double>() * 1e6
                << " us\n";
    std::cout << "fitted exponent " << std::setprecision(3) << slope
              << (ok ? " <= " : " > ") << a.max_exponent << "\n";
  }
  return ok ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Measurement-based circuit optimizer"};
  app.require_subcommand(1);
  Args a;
  auto add_common = [&](CLI::App *s, bool needs_in) {
    auto *in = s->add_option("--in", a.in, "input JSON file");
    if (needs_in) in->required()->check(CLI::ExistingFile);
    s->add_option("--out", a.out, "output JSON file, '-' for stdout");
    s->add_option("--report", a.report, "report format")
        ->check(CLI::IsMember({"json", "text"}));
  };
  auto *opt = app.add_subcommand("optimize", "circuit to compact circuit");
  add_common(opt, true);
  opt->add_flag("--verify", a.verify, "check every stage by simulation");
  opt->add_option("--emit-trace", a.trace, "write the rewrite trace");
  opt->add_option("--pauli", a.pauli, "apply Pauli rules: halfpi, zero, both")
      ->expected(0, 1);
  opt->add_flag("--strict", a.strict, "fail unless the result is compact");
  opt->add_flag("--dump-state", a.dump_state, "print output amplitudes");
  opt->add_option("--seed", a.seed, "seed for randomized steps");

  auto *gf = app.add_subcommand("gflow", "flow, SSF and optimal gflow");
  add_common(gf, true);

  auto *sh = app.add_subcommand("shift", "signal shift a flow pattern");
  add_common(sh, true);
  sh->add_option("--pauli", a.pauli, "apply Pauli rules: halfpi, zero, both")
      ->expected(0, 1);
  sh->add_option("--seed", a.seed, "shift in a random order")
      ->each([&](const std::string &) { a.seeded = true; });

  auto *ex = app.add_subcommand("extend", "extended translation of a pattern");
  add_common(ex, true);

  auto *co = app.add_subcommand("compactify", "compactify an extended circuit");
  add_common(co, true);
  co->add_option("--emit-trace", a.trace, "write the rewrite trace");
  co->add_flag("--partial", a.partial, "skip procedures that do not apply");
  co->add_flag("--verify", a.verify, "compare input and output maps");
  co->add_flag("--dump-state", a.dump_state, "print output amplitudes");

  auto *ve = app.add_subcommand("verify", "check equivalence by simulation");
  add_common(ve, true);
  ve->add_option("--against", a.against, "second circuit or pattern")
      ->check(CLI::ExistingFile);
  ve->add_flag("--dump-state", a.dump_state, "print output amplitudes");

  auto *be = app.add_subcommand("bench", "time the SSF construction");
  add_common(be, false);
  be->add_option("--sizes", a.sizes, "graph sizes")->delimiter(',');
  be->add_option("--graph", a.graph_kind, "path or grid");
  be->add_option("--max-exponent", a.max_exponent, "largest accepted exponent");
  be->add_option("--seed", a.seed, "unused; accepted for uniformity");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }
  // `--pauli` given without a value means both rules.
  if (opt->count("--pauli") && a.pauli.empty()) a.pauli = "both";
  if (sh->count("--pauli") && a.pauli.empty()) a.pauli = "both";
  try {
    if (opt->parsed()) return cmd_optimize(a);
    if (gf->parsed()) return cmd_gflow(a);
    if (sh->parsed()) return cmd_shift(a);
    if (ex->parsed()) return cmd_extend(a);
    if (co->parsed()) return cmd_compactify(a);
    if (ve->parsed()) return cmd_verify(a);
    if (be->parsed()) return cmd_bench(a);
  } catch (const InputError &e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const nlohmann::json::exception &e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const InvariantError &e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInvariant;
  } catch (const std::exception &e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInvariant;
  }
  return kOk;
}
