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

#include "mbqc/pattern.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "mbqc/errors.hpp"

namespace mbqc {

void toggle(SignalSet &s, Vertex v) {
  if (!s.erase(v)) s.insert(v);
}

SignalSet symmetric_difference(const SignalSet &a, const SignalSet &b) {
  SignalSet r = a;
  for (Vertex v : b) toggle(r, v);
  return r;
}

Command Command::N(Vertex v) {
  Command c;
  c.kind = CommandKind::N;
  c.qubit = v;
  return c;
}

Command Command::E(Vertex u, Vertex v) {
  Command c;
  c.kind = CommandKind::E;
  c.qubit = std::min(u, v);
  c.other = std::max(u, v);
  return c;
}

Command Command::M(Vertex v, Angle a, SignalSet s, SignalSet t) {
  Command c;
  c.kind = CommandKind::M;
  c.qubit = v;
  c.angle = a;
  c.s_domain = std::move(s);
  c.t_domain = std::move(t);
  return c;
}

Command Command::X(Vertex v, SignalSet s) {
  Command c;
  c.kind = CommandKind::X;
  c.qubit = v;
  c.s_domain = std::move(s);
  return c;
}

Command Command::Z(Vertex v, SignalSet s) {
  Command c = X(v, std::move(s));
  c.kind = CommandKind::Z;
  return c;
}

Command Command::S(Vertex v, SignalSet s) {
  Command c = X(v, std::move(s));
  c.kind = CommandKind::S;
  return c;
}

bool Command::depends_on(Vertex v) const {
  return s_domain.count(v) > 0 || t_domain.count(v) > 0;
}

namespace {

const char *kind_name(CommandKind k) {
  switch (k) {
    case CommandKind::N: return "N";
    case CommandKind::E: return "E";
    case CommandKind::M: return "M";
    case CommandKind::X: return "X";
    case CommandKind::Z: return "Z";
    case CommandKind::S: return "S";
  }
  return "?";
}

// Vertices in the order induced by the flow, earliest first.
std::vector<Vertex> flow_order(const OpenGraph &g, const Flow &fl) {
  std::vector<Vertex> order = members(g.non_outputs());
  std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) {
    return fl.layer[a] > fl.layer[b];
  });
  return order;
}

void toggle_in_domains(Command &c, Vertex k, Vertex i) {
  if (c.s_domain.count(k)) toggle(c.s_domain, i);
  if (c.t_domain.count(k)) toggle(c.t_domain, i);
}

std::string domain_str(const OpenGraph &g, const SignalSet &s) {
  std::string r;
  for (Vertex v : s) {
    if (!r.empty()) r += "+";
    r += "s" + std::to_string(g.label(v));
  }
  return r;
}

}  // namespace

std::vector<std::string> runnability_violations(const Pattern &p) {
  const OpenGraph &g = p.space;
  const unsigned n = g.n_vertices();
  std::vector<std::string> out;
  std::vector<bool> prepared(n, false), measured(n, false);
  for (Vertex v : g.inputs()) prepared[v] = true;
  auto name = [&](Vertex v) { return std::to_string(g.label(v)); };
  auto live = [&](Vertex v, std::size_t pos, const char *what) {
    if (v >= n) {
      out.push_back("command " + std::to_string(pos) + ": unknown qubit");
      return false;
    }
    if (!prepared[v])
      out.push_back(std::string(what) + " on unprepared qubit " + name(v));
    else if (measured[v])
      out.push_back(std::string(what) + " on measured qubit " + name(v));
    else
      return true;
    return false;
  };
  auto deps = [&](const SignalSet &s, Vertex v) {
    for (Vertex d : s)
      if (d >= n || !measured[d])
        out.push_back(
            "qubit " + name(v) + " depends on unmeasured signal " +
            (d < n ? name(d) : std::to_string(d)));
  };
  for (std::size_t pos = 0; pos < p.commands.size(); ++pos) {
    const Command &c = p.commands[pos];
    switch (c.kind) {
      case CommandKind::N:
        if (c.qubit >= n) {
          out.push_back("command " + std::to_string(pos) + ": unknown qubit");
        } else if (prepared[c.qubit]) {
          out.push_back("qubit " + name(c.qubit) + " prepared twice");
        } else {
          prepared[c.qubit] = true;
        }
        break;
      case CommandKind::E:
        if (c.qubit == c.other)
          out.push_back("self entanglement on " + name(c.qubit));
        live(c.qubit, pos, "E");
        live(c.other, pos, "E");
        break;
      case CommandKind::M:
        if (live(c.qubit, pos, "M")) {
          if (g.is_output(c.qubit))
            out.push_back("output qubit " + name(c.qubit) + " measured");
          deps(c.s_domain, c.qubit);
          deps(c.t_domain, c.qubit);
          measured[c.qubit] = true;
        }
        break;
      case CommandKind::X:
      case CommandKind::Z:
      case CommandKind::S:
        if (c.kind == CommandKind::S || live(c.qubit, pos, kind_name(c.kind)))
          deps(c.s_domain, c.qubit);
        break;
    }
  }
  for (Vertex v = 0; v < n; ++v) {
    if (!prepared[v]) out.push_back("qubit " + name(v) + " never prepared");
    if (!g.is_output(v) && !measured[v])
      out.push_back("qubit " + name(v) + " never measured");
  }
  return out;
}

Pattern pattern_from_circuit(const Circuit &c) {
  c.validate();
  for (Wire w : c.wires)
    if (c.initial.at(w) != WireInit::Input || c.measured.count(w))
      throw InputError("circuit wires must be unmeasured inputs");
  std::map<Wire, unsigned> jcount;
  for (const Gate &gt : c.gates) {
    if (gt.kind == GateKind::J)
      ++jcount[gt.a];
    else if (gt.kind != GateKind::CZ && gt.kind != GateKind::E)
      throw InputError("unsupported gate " + gt.str());
  }
  // Vertices of each wire are contiguous, wires in order.
  std::map<Wire, Vertex> frontier;
  std::vector<Vertex> inputs, outputs;
  Vertex next = 0;
  for (Wire w : c.wires) {
    frontier[w] = next;
    inputs.push_back(next);
    next += jcount[w] + 1;
    outputs.push_back(next - 1);
  }
  OpenGraph g(next);
  std::vector<long> labels(next);
  for (Vertex v = 0; v < next; ++v) labels[v] = static_cast<long>(v) + 1;
  g.set_labels(labels);
  g.set_inputs(inputs);
  g.set_outputs(outputs);

  Pattern p;
  auto cancel_or_add = [&](Vertex u, Vertex v) {
    const Command e = Command::E(u, v);
    auto it = std::find(p.commands.begin(), p.commands.end(), e);
    if (it != p.commands.end())
      p.commands.erase(it);
    else
      p.commands.push_back(e);
  };
  for (const Gate &gt : c.gates) {
    if (gt.kind == GateKind::J) {
      const Vertex u = frontier[gt.a];
      const Vertex v = u + 1;
      p.commands.push_back(Command::N(v));
      p.commands.push_back(Command::E(u, v));
      p.commands.push_back(Command::M(u, -gt.angle));
      p.commands.push_back(Command::X(v, {u}));
      frontier[gt.a] = v;
    } else {
      cancel_or_add(frontier[gt.a], frontier[gt.b]);
    }
  }
  for (const Command &cmd : p.commands)
    if (cmd.kind == CommandKind::E) g.add_edge(cmd.qubit, cmd.other);
  p.space = g;
  return p;
}

AngleMap angles_of(const Pattern &p) {
  AngleMap m;
  for (const Command &c : p.commands)
    if (c.kind == CommandKind::M) m[c.qubit] = c.angle;
  return m;
}

OpenGraph graph_of(const Pattern &p) {
  OpenGraph g(p.space.n_vertices());
  g.set_labels(p.space.labels());
  g.set_inputs(p.space.inputs());
  g.set_outputs(p.space.outputs());
  for (const Command &c : p.commands) {
    if (c.kind != CommandKind::E) continue;
    if (g.has_edge(c.qubit, c.other))
      g.remove_edge(c.qubit, c.other);
    else
      g.add_edge(c.qubit, c.other);
  }
  return g;
}

namespace {

Pattern prefix(const OpenGraph &g) {
  Pattern p;
  p.space = g;
  for (Vertex v : members(g.non_inputs())) p.commands.push_back(Command::N(v));
  for (const Edge &e : g.edges())
    p.commands.push_back(Command::E(e.first, e.second));
  return p;
}

const Angle &angle_at(const AngleMap &angles, const OpenGraph &g, Vertex v) {
  auto it = angles.find(v);
  if (it == angles.end())
    throw InputError("missing angle for vertex " + std::to_string(g.label(v)));
  return it->second;
}

}  // namespace

Pattern flow_pattern(const Flow &fl, const OpenGraph &g, const AngleMap &angles) {
  if (!verify_flow(g, fl).empty()) throw InputError("invalid flow");
  Pattern p = prefix(g);
  for (Vertex i : flow_order(g, fl)) {
    const Vertex fi = static_cast<Vertex>(fl.f[i]);
    p.commands.push_back(Command::M(i, angle_at(angles, g, i)));
    p.commands.push_back(Command::X(fi, {i}));
    VertexSet zs = g.neighbors(fi);
    zs.reset(i);
    for (Vertex k : members(zs)) p.commands.push_back(Command::Z(k, {i}));
  }
  return p;
}

Pattern ssf_pattern(const GFlow &ssf, const OpenGraph &g, const AngleMap &angles) {
  Pattern p = prefix(g);
  std::vector<Vertex> order = members(g.non_outputs());
  std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) {
    return ssf.layer[a] > ssf.layer[b];
  });
  for (Vertex i : order) {
    p.commands.push_back(Command::M(i, angle_at(angles, g, i)));
    for (Vertex j : members(ssf.g[i])) p.commands.push_back(Command::X(j, {i}));
    const VertexSet odd = g.odd_neighborhood(ssf.g[i]) & g.output_set();
    for (Vertex k : members(odd))
      if (k != i) p.commands.push_back(Command::Z(k, {i}));
  }
  return canonical(p);
}

Pattern standardize(const Pattern &p) {
  const auto bad = runnability_violations(p);
  if (!bad.empty()) throw InputError("pattern not runnable: " + bad.front());
  const unsigned n = p.space.n_vertices();
  std::vector<SignalSet> px(n), pz(n);
  std::vector<Command> prep, ent, meas;
  for (const Command &c : p.commands) {
    switch (c.kind) {
      case CommandKind::N:
        prep.push_back(c);
        break;
      case CommandKind::E:
        pz[c.other] = symmetric_difference(pz[c.other], px[c.qubit]);
        pz[c.qubit] = symmetric_difference(pz[c.qubit], px[c.other]);
        ent.push_back(c);
        break;
      case CommandKind::M: {
        Command m = c;
        m.s_domain = symmetric_difference(m.s_domain, px[c.qubit]);
        m.t_domain = symmetric_difference(m.t_domain, pz[c.qubit]);
        px[c.qubit].clear();
        pz[c.qubit].clear();
        meas.push_back(std::move(m));
        break;
      }
      case CommandKind::X:
        px[c.qubit] = symmetric_difference(px[c.qubit], c.s_domain);
        break;
      case CommandKind::Z:
        pz[c.qubit] = symmetric_difference(pz[c.qubit], c.s_domain);
        break;
      case CommandKind::S:
        throw InputError("standardize does not accept shift commands");
    }
  }
  Pattern r;
  r.space = p.space;
  r.commands = std::move(prep);
  r.commands.insert(r.commands.end(), ent.begin(), ent.end());
  r.commands.insert(r.commands.end(), meas.begin(), meas.end());
  for (Vertex v = 0; v < n; ++v) {
    if (!px[v].empty()) r.commands.push_back(Command::X(v, px[v]));
    if (!pz[v].empty()) r.commands.push_back(Command::Z(v, pz[v]));
  }
  return r;
}

std::vector<unsigned> pattern_rounds(const Pattern &p) {
  const Pattern s = standardize(p);
  std::vector<unsigned> round(p.space.n_vertices(), 0);
  // Measurements of a runnable pattern only depend on earlier ones.
  for (const Command &c : s.commands) {
    if (c.kind != CommandKind::M) continue;
    unsigned r = 1;
    for (Vertex d : c.s_domain) r = std::max(r, round[d] + 1);
    for (Vertex d : c.t_domain) r = std::max(r, round[d] + 1);
    round[c.qubit] = r;
  }
  return round;
}

unsigned pattern_depth(const Pattern &p) {
  const auto r = pattern_rounds(p);
  return r.empty() ? 0 : *std::max_element(r.begin(), r.end());
}

Pattern canonical(const Pattern &p) {
  const Pattern s = standardize(p);
  const auto round = pattern_rounds(s);
  std::vector<Command> prep, meas, corr;
  std::set<std::pair<Vertex, Vertex>> edges;
  for (const Command &c : s.commands) {
    switch (c.kind) {
      case CommandKind::N:
        prep.push_back(c);
        break;
      case CommandKind::E: {
        const auto e = std::make_pair(c.qubit, c.other);
        if (!edges.erase(e)) edges.insert(e);
        break;
      }
      case CommandKind::M:
        meas.push_back(c);
        break;
      default:
        corr.push_back(c);
    }
  }
  std::sort(prep.begin(), prep.end(),
            [](const Command &a, const Command &b) { return a.qubit < b.qubit; });
  std::sort(meas.begin(), meas.end(), [&](const Command &a, const Command &b) {
    return std::make_pair(round[a.qubit], a.qubit) <
           std::make_pair(round[b.qubit], b.qubit);
  });
  std::stable_sort(corr.begin(), corr.end(),
                   [](const Command &a, const Command &b) {
                     return a.qubit < b.qubit;
                   });
  Pattern r;
  r.space = p.space;
  r.commands = std::move(prep);
  for (const auto &[u, v] : edges) r.commands.push_back(Command::E(u, v));
  r.commands.insert(r.commands.end(), meas.begin(), meas.end());
  r.commands.insert(r.commands.end(), corr.begin(), corr.end());
  return r;
}

Pattern signal_shift(const Pattern &p, const Flow &fl, std::mt19937 *rng) {
  const OpenGraph g = graph_of(p);
  if (canonical(p).commands !=
      canonical(flow_pattern(fl, g, angles_of(p))).commands)
    throw InputError("pattern is not the flow pattern of the given flow");
  Pattern s = standardize(p);
  std::map<Vertex, std::size_t> mpos;
  for (std::size_t k = 0; k < s.commands.size(); ++k)
    if (s.commands[k].kind == CommandKind::M) mpos[s.commands[k].qubit] = k;

  // Replace s_k by s_k + s_i everywhere once Z_k^{s_i} has been absorbed.
  auto shift = [&](Vertex i, Vertex k) {
    toggle(s.commands[mpos.at(k)].t_domain, i);
    for (Command &c : s.commands) toggle_in_domains(c, k, i);
  };
  auto pending = [&](Vertex i) -> std::optional<Vertex> {
    for (const auto &[k, pos] : mpos)
      if (s.commands[pos].t_domain.count(i)) return k;
    return std::nullopt;
  };

  if (rng == nullptr) {
    for (Vertex i : flow_order(g, fl))
      while (auto k = pending(i)) shift(i, *k);
  } else {
    for (;;) {
      std::vector<std::pair<Vertex, Vertex>> todo;
      for (const auto &[k, pos] : mpos)
        for (Vertex i : s.commands[pos].t_domain) todo.emplace_back(i, k);
      if (todo.empty()) break;
      std::uniform_int_distribution<std::size_t> pick(0, todo.size() - 1);
      const auto [i, k] = todo[pick(*rng)];
      shift(i, k);
    }
  }
  return canonical(s);
}

Pattern pauli_simplify(const Pattern &p, unsigned rules) {
  Pattern s = canonical(p);
  std::map<Vertex, std::size_t> mpos;
  for (std::size_t k = 0; k < s.commands.size(); ++k)
    if (s.commands[k].kind == CommandKind::M) mpos[s.commands[k].qubit] = k;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto &[v, pos] : mpos) {
      Command &m = s.commands[pos];
      if (m.angle.is_multiple_of_pi() && (rules & kZeroRule) &&
          !m.s_domain.empty()) {
        m.s_domain.clear();
        changed = true;
      }
      if (m.angle.is_odd_half_pi() && (rules & kHalfPiRule) &&
          !m.s_domain.empty()) {
        m.t_domain = symmetric_difference(m.t_domain, m.s_domain);
        m.s_domain.clear();
        changed = true;
      }
      if (!m.t_domain.empty()) {
        const SignalSet t = m.t_domain;
        m.t_domain.clear();
        for (Vertex u : t)
          for (Command &c : s.commands) toggle_in_domains(c, v, u);
        changed = true;
      }
    }
  }
  return canonical(s);
}

GFlow gflow_of(const Pattern &p) {
  const Pattern s = standardize(p);
  const OpenGraph &g = s.space;
  const unsigned n = g.n_vertices();
  GFlow gf;
  gf.g.assign(n, g.empty_set());
  gf.layer.assign(n, 0);
  for (const Command &c : s.commands) {
    if (c.kind == CommandKind::M) {
      if (!c.t_domain.empty())
        throw InputError("pattern is not signal shifted");
      for (Vertex d : c.s_domain) gf.g[d].set(c.qubit);
    } else if (c.kind == CommandKind::X) {
      for (Vertex d : c.s_domain) gf.g[d].set(c.qubit);
    }
  }
  std::vector<int> state(n, 0);
  std::function<unsigned(Vertex)> visit = [&](Vertex v) -> unsigned {
    if (g.is_output(v)) return 0;
    if (state[v] == 2) return gf.layer[v];
    if (state[v] == 1) throw InvariantError("correction sets are cyclic");
    state[v] = 1;
    unsigned l = 1;
    for (Vertex u : members(gf.g[v]))
      if (u != v) l = std::max(l, visit(u) + 1);
    gf.layer[v] = l;
    state[v] = 2;
    return l;
  };
  for (Vertex v = 0; v < n; ++v) visit(v);
  return gf;
}

nlohmann::json pattern_to_json(const Pattern &p) {
  const OpenGraph &g = p.space;
  auto dom = [&](const SignalSet &s) {
    nlohmann::json a = nlohmann::json::array();
    for (Vertex v : s) a.push_back(g.label(v));
    return a;
  };
  nlohmann::json cmds = nlohmann::json::array();
  for (const Command &c : p.commands) {
    nlohmann::json j = {{"kind", kind_name(c.kind)}};
    if (c.kind == CommandKind::E) {
      j["qubits"] = {g.label(c.qubit), g.label(c.other)};
    } else {
      j["qubit"] = g.label(c.qubit);
    }
    if (c.kind == CommandKind::M) {
      j["angle"] = angle_to_json(c.angle);
      j["sdep"] = dom(c.s_domain);
      j["tdep"] = dom(c.t_domain);
    } else if (c.kind != CommandKind::N && c.kind != CommandKind::E) {
      j["sdep"] = dom(c.s_domain);
    }
    cmds.push_back(std::move(j));
  }
  return {{"space", graph_to_json(g)}, {"commands", cmds}};
}

Pattern pattern_from_json(const nlohmann::json &j) {
  Pattern p;
  try {
    p.space = graph_from_json(j.at("space"));
    const OpenGraph &g = p.space;
    auto dom = [&](const nlohmann::json &c, const char *key) {
      SignalSet s;
      if (c.contains(key))
        for (const auto &x : c.at(key)) toggle(s, g.vertex_of(x.get<long>()));
      return s;
    };
    for (const auto &c : j.at("commands")) {
      const std::string k = c.at("kind").get<std::string>();
      if (k == "E") {
        const auto &q = c.at("qubits");
        if (q.size() != 2) throw InputError("E needs two qubits");
        p.commands.push_back(Command::E(g.vertex_of(q[0].get<long>()),
                                        g.vertex_of(q[1].get<long>())));
        continue;
      }
      const Vertex v = g.vertex_of(c.at("qubit").get<long>());
      if (k == "N")
        p.commands.push_back(Command::N(v));
      else if (k == "M")
        p.commands.push_back(Command::M(v, angle_from_json(c.at("angle")),
                                        dom(c, "sdep"), dom(c, "tdep")));
      else if (k == "X")
        p.commands.push_back(Command::X(v, dom(c, "sdep")));
      else if (k == "Z")
        p.commands.push_back(Command::Z(v, dom(c, "sdep")));
      else if (k == "S")
        p.commands.push_back(Command::S(v, dom(c, "sdep")));
      else
        throw InputError("unknown command kind " + k);
    }
  } catch (const nlohmann::json::exception &e) {
    throw InputError(std::string("malformed pattern: ") + e.what());
  }
  return p;
}

std::string to_string(const Pattern &p) {
  const OpenGraph &g = p.space;
  std::ostringstream os;
  bool first = true;
  for (const Command &c : p.commands) {
    if (!first) os << ' ';
    first = false;
    if (c.kind == CommandKind::M && !c.t_domain.empty())
      os << '[' << domain_str(g, c.t_domain) << ']';
    os << kind_name(c.kind) << g.label(c.qubit);
    if (c.kind == CommandKind::E) os << ',' << g.label(c.other);
    if (c.kind == CommandKind::M) os << '(' << c.angle.str() << ')';
    if (!c.s_domain.empty()) os << '^' << domain_str(g, c.s_domain);
  }
  return os.str();
}

}  // namespace mbqc
