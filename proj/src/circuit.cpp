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

#include "mbqc/circuit.hpp"

#include <algorithm>
#include <sstream>

#include "mbqc/errors.hpp"
#include "mbqc/pattern.hpp"

namespace mbqc {

Gate Gate::J(Wire w, Angle angle) {
  Gate g;
  g.kind = GateKind::J;
  g.a = w;
  g.angle = angle;
  return g;
}

Gate Gate::E(Wire u, Wire v) {
  Gate g;
  g.kind = GateKind::E;
  g.a = std::min(u, v);
  g.b = std::max(u, v);
  g.origin = std::make_pair(g.a, g.b);
  return g;
}

Gate Gate::CZ(Wire control, Wire target) {
  Gate g;
  g.kind = GateKind::CZ;
  g.a = control;
  g.b = target;
  return g;
}

Gate Gate::CX(Wire control, Wire target) {
  Gate g = CZ(control, target);
  g.kind = GateKind::CX;
  return g;
}

Gate Gate::Z(Wire w) {
  Gate g;
  g.kind = GateKind::Z;
  g.a = w;
  return g;
}

bool Gate::same_op(const Gate &o) const {
  if (kind != o.kind) return false;
  if (kind == GateKind::J) return a == o.a && angle == o.angle;
  if (kind == GateKind::Z) return a == o.a;
  if (kind == GateKind::E || kind == GateKind::CZ)
    return std::minmax(a, b) == std::minmax(o.a, o.b);
  return a == o.a && b == o.b;
}

std::string Gate::str() const {
  switch (kind) {
    case GateKind::J:
      return "J" + std::to_string(a) + "(" + angle.str() + ")";
    case GateKind::Z:
      return "Z" + std::to_string(a);
    case GateKind::E:
      return "E(" + std::to_string(a) + "," + std::to_string(b) + ")";
    case GateKind::CZ:
      return "CZ(" + std::to_string(a) + "," + std::to_string(b) + ")";
    case GateKind::CX:
      return "CX(" + std::to_string(a) + "," + std::to_string(b) + ")";
  }
  return "?";
}

bool gates_commute(const Gate &x, const Gate &y) {
  const bool shared = x.acts_on(y.a) || (y.two_qubit() && x.acts_on(y.b));
  if (!shared) return true;
  if (x.diagonal() && y.diagonal()) return true;
  if (x.kind == GateKind::J || y.kind == GateKind::J) return false;
  if (x.kind == GateKind::CX && y.kind == GateKind::CX)
    return x.a != y.b && y.a != x.b;
  const Gate &cx = x.kind == GateKind::CX ? x : y;
  const Gate &d = x.kind == GateKind::CX ? y : x;
  return !d.acts_on(cx.b);
}

Circuit Circuit::on_wires(unsigned n) {
  Circuit c;
  for (Wire w = 0; w < n; ++w) {
    c.wires.push_back(w);
    c.initial[w] = WireInit::Input;
    c.inputs.push_back(w);
    c.outputs.push_back(w);
  }
  return c;
}

bool Circuit::has_wire(Wire w) const {
  return std::find(wires.begin(), wires.end(), w) != wires.end();
}

std::size_t Circuit::position(Wire w) const {
  auto it = std::find(wires.begin(), wires.end(), w);
  if (it == wires.end())
    throw InputError("unknown wire " + std::to_string(w));
  return static_cast<std::size_t>(it - wires.begin());
}

void Circuit::add(const Gate &g) { gates.push_back(g); }

void Circuit::validate() const {
  std::set<Wire> ws(wires.begin(), wires.end());
  if (ws.size() != wires.size()) throw InputError("duplicate wire");
  for (Wire w : wires)
    if (!initial.count(w))
      throw InputError("wire " + std::to_string(w) + " has no preparation");
  for (const Gate &g : gates) {
    if (!ws.count(g.a) || (g.two_qubit() && !ws.count(g.b)))
      throw InputError("gate " + g.str() + " on unknown wire");
    if (g.two_qubit() && g.a == g.b)
      throw InputError("gate " + g.str() + " on a single wire");
  }
  for (Wire w : measured)
    if (!ws.count(w)) throw InputError("measured wire does not exist");
  for (Wire w : outputs) {
    if (!ws.count(w)) throw InputError("output wire does not exist");
    if (measured.count(w))
      throw InputError("output wire " + std::to_string(w) + " is measured");
  }
  for (Wire w : inputs)
    if (!ws.count(w) || initial.at(w) != WireInit::Input)
      throw InputError("input wire " + std::to_string(w) + " is not an input");
}

std::vector<SliceLayer> slices(const Circuit &c) {
  std::map<unsigned, SliceLayer> by_layer;
  for (std::size_t k = 0; k < c.gates.size(); ++k) {
    const SliceTag &t = c.gates[k].tag;
    if (t.kind == SliceKind::None) continue;
    SliceLayer &l = by_layer[t.layer];
    l.layer = t.layer;
    if (t.kind == SliceKind::E) {
      l.entangling.push_back(k);
    } else if (t.kind == SliceKind::J) {
      l.jgates.push_back(k);
    } else {
      auto it = std::find_if(
          l.corrections.begin(), l.corrections.end(),
          [&](const CorrectionSlice &s) {
            return static_cast<int>(s.owner) == t.owner;
          });
      if (it == l.corrections.end()) {
        l.corrections.push_back({static_cast<Wire>(t.owner), {}});
        it = l.corrections.end() - 1;
      }
      it->gates.push_back(k);
    }
  }
  std::vector<SliceLayer> out;
  for (auto &[n, l] : by_layer) out.push_back(std::move(l));
  return out;
}

Circuit extended_translation(
    const Pattern &p, const GFlow &ssf, const Flow &fl) {
  const GFlow read = gflow_of(p);
  const OpenGraph g = graph_of(p);
  const unsigned n = g.n_vertices();
  for (Vertex v : members(g.non_outputs()))
    if (read.g[v] != ssf.g[v])
      throw InputError(
          "pattern corrections of vertex " + std::to_string(g.label(v)) +
          " differ from the signal shifted flow");
  const Pattern s = canonical(p);
  for (const Command &c : s.commands)
    if (c.kind == CommandKind::Z && !g.is_output(c.qubit))
      throw InputError("pattern is not signal shifted");
  std::vector<VertexSet> zcorr(n, g.empty_set());
  for (const Command &c : s.commands)
    if (c.kind == CommandKind::Z)
      for (Vertex i : c.s_domain) zcorr[i].flip(c.qubit);
  const AngleMap angles = angles_of(p);
  const auto round = measurement_rounds(g, ssf);

  Circuit c;
  for (Wire w = 0; w < n; ++w) {
    c.wires.push_back(w);
    c.initial[w] = g.is_input(w) ? WireInit::Input : WireInit::Plus;
    if (!g.is_output(w)) c.measured.insert(w);
  }
  c.inputs = g.inputs();
  c.outputs = g.outputs();
  for (const Edge &e : g.edges()) {
    Gate gt = Gate::E(e.first, e.second);
    gt.tag = {SliceKind::E, 1, kNoVertex};
    c.add(gt);
  }
  unsigned depth = 0;
  for (Vertex v : members(g.non_outputs())) depth = std::max(depth, round[v]);
  auto by_lf = [&](bool descending) {
    return [&, descending](Vertex a, Vertex b) {
      if (fl.layer[a] != fl.layer[b])
        return descending ? fl.layer[a] > fl.layer[b]
                          : fl.layer[a] < fl.layer[b];
      return a < b;
    };
  };
  for (unsigned r = 1; r <= depth; ++r) {
    std::vector<Vertex> wn;
    for (Vertex v : members(g.non_outputs()))
      if (round[v] == r) wn.push_back(v);
    for (Vertex i : wn) {
      Gate gt = Gate::J(i, -angles.at(i));
      gt.tag = {SliceKind::J, r, static_cast<int>(i)};
      c.add(gt);
    }
    std::sort(wn.begin(), wn.end(), by_lf(false));
    for (Vertex i : wn) {
      const SliceTag tag{SliceKind::C, r, static_cast<int>(i)};
      std::vector<Vertex> targets = members(ssf.g[i]);
      std::sort(targets.begin(), targets.end(), by_lf(true));
      for (Vertex j : targets) {
        Gate gt = Gate::CX(i, j);
        gt.tag = tag;
        c.add(gt);
      }
      for (Vertex o : members(zcorr[i])) {
        Gate gt = Gate::CZ(i, o);
        gt.tag = tag;
        c.add(gt);
      }
    }
  }
  c.validate();
  return c;
}

namespace {

std::optional<std::size_t> find_gate(
    const Circuit &c, std::size_t from, const Gate &want) {
  for (std::size_t k = from; k < c.gates.size(); ++k)
    if (c.gates[k].same_op(want) ||
        (want.kind == GateKind::J && c.gates[k].kind == GateKind::J &&
         c.gates[k].a == want.a))
      return k;
  return std::nullopt;
}

struct JBlock {
  std::size_t e, j, cx;
};

std::optional<JBlock> locate_jblock(const Circuit &c, Wire i, Wire fi) {
  if (i == fi || !c.has_wire(i) || !c.has_wire(fi)) return std::nullopt;
  if (c.initial.at(fi) != WireInit::Plus) return std::nullopt;
  if (!c.measured.count(i)) return std::nullopt;
  const auto e = find_gate(c, 0, Gate::E(i, fi));
  if (!e) return std::nullopt;
  // Only J_i then CX_{i,fi} on i after the E gate.
  std::vector<std::size_t> on_i;
  for (std::size_t k = *e + 1; k < c.gates.size(); ++k)
    if (c.gates[k].acts_on(i)) on_i.push_back(k);
  if (on_i.size() != 2) return std::nullopt;
  const Gate &gj = c.gates[on_i[0]];
  const Gate &gx = c.gates[on_i[1]];
  if (gj.kind != GateKind::J || gx.kind != GateKind::CX || gx.a != i ||
      gx.b != fi)
    return std::nullopt;
  for (std::size_t k = 0; k < on_i[1]; ++k)
    if (k != *e && c.gates[k].acts_on(fi)) return std::nullopt;
  return JBlock{*e, on_i[0], on_i[1]};
}

}  // namespace

bool is_jblock(const Circuit &c, Wire i, Wire fi) {
  return locate_jblock(c, i, fi).has_value();
}

Circuit apply_jgate_identity(const Circuit &c, Wire i, Wire fi) {
  const auto blk = locate_jblock(c, i, fi);
  if (!blk)
    throw InputError(
        "no J-block on wires " + std::to_string(i) + "," + std::to_string(fi));
  Circuit r = c;
  r.gates.clear();
  for (std::size_t k = 0; k < c.gates.size(); ++k) {
    if (k == blk->e || k == blk->cx) continue;
    Gate g = c.gates[k];
    if (k == blk->j) {
      g.a = fi;
      if (g.tag.owner == static_cast<int>(i)) g.tag.owner = static_cast<int>(fi);
    } else if (k < blk->e) {
      if (g.a == i) g.a = fi;
      if (g.two_qubit() && g.b == i) g.b = fi;
    }
    r.gates.push_back(g);
  }
  r.initial[fi] = c.initial.at(i);
  r.initial.erase(i);
  r.wires.erase(std::find(r.wires.begin(), r.wires.end(), i));
  r.measured.erase(i);
  std::replace(r.inputs.begin(), r.inputs.end(), i, fi);
  r.validate();
  return r;
}

CircuitStats circuit_stats(const Circuit &c) {
  CircuitStats st;
  st.wires = static_cast<unsigned>(c.wires.size());
  std::map<Wire, unsigned> level;
  std::map<Wire, std::set<Wire>> partners;
  std::set<unsigned> jtags;
  bool untagged_j = false;
  std::map<Wire, unsigned> jlevel;
  for (const Gate &g : c.gates) {
    unsigned l = level[g.a];
    if (g.two_qubit()) l = std::max(l, level[g.b]);
    level[g.a] = l + 1;
    if (g.two_qubit()) {
      level[g.b] = l + 1;
      partners[g.a].insert(g.b);
      partners[g.b].insert(g.a);
    }
    st.depth = std::max(st.depth, l + 1);
    unsigned jl = jlevel[g.a];
    if (g.two_qubit()) jl = std::max(jl, jlevel[g.b]);
    if (g.kind == GateKind::J) {
      ++st.jgates;
      ++jl;
      if (g.tag.kind == SliceKind::J)
        jtags.insert(g.tag.layer);
      else
        untagged_j = true;
    }
    jlevel[g.a] = jl;
    if (g.two_qubit()) jlevel[g.b] = jl;
  }
  for (const auto &[w, ps] : partners)
    st.maxdeg = std::max(st.maxdeg, static_cast<unsigned>(ps.size()));
  if (untagged_j) {
    for (const auto &[w, l] : jlevel) st.jlayers = std::max(st.jlayers, l);
  } else {
    st.jlayers = static_cast<unsigned>(jtags.size());
  }
  return st;
}

std::string to_dot(const Circuit &c) {
  std::ostringstream os;
  os << "digraph circuit {\n  rankdir=LR;\n";
  std::map<Wire, std::string> last;
  for (Wire w : c.wires) {
    const std::string id = "w" + std::to_string(w);
    os << "  " << id << " [shape=plaintext,label=\"" << w
       << (c.initial.at(w) == WireInit::Plus ? " |+>" : "") << "\"];\n";
    last[w] = id;
  }
  std::map<unsigned, std::vector<std::string>> clusters;
  for (std::size_t k = 0; k < c.gates.size(); ++k) {
    const Gate &g = c.gates[k];
    const std::string id = "g" + std::to_string(k);
    os << "  " << id << " [shape=box,label=\"" << g.str() << "\"];\n";
    for (Wire w : {g.a, g.b}) {
      if (w == g.b && !g.two_qubit()) break;
      os << "  " << last[w] << " -> " << id << ";\n";
      last[w] = id;
    }
    if (g.tag.kind != SliceKind::None) clusters[g.tag.layer].push_back(id);
  }
  for (const auto &[layer, ids] : clusters) {
    os << "  subgraph cluster_" << layer << " {\n    label=\"layer " << layer
       << "\";\n";
    for (const auto &id : ids) os << "    " << id << ";\n";
    os << "  }\n";
  }
  for (Wire w : c.measured)
    os << "  m" << w << " [shape=plaintext,label=\"Z-meas\"];\n  " << last[w]
       << " -> m" << w << ";\n";
  os << "}\n";
  return os.str();
}

namespace {

const char *gate_kind_name(GateKind k) {
  switch (k) {
    case GateKind::J: return "J";
    case GateKind::E: return "E";
    case GateKind::CZ: return "CZ";
    case GateKind::CX: return "CX";
    case GateKind::Z: return "Z";
  }
  return "?";
}

const char *slice_kind_name(SliceKind k) {
  switch (k) {
    case SliceKind::E: return "E";
    case SliceKind::J: return "J";
    case SliceKind::C: return "C";
    default: return "none";
  }
}

}  // namespace

nlohmann::json circuit_to_json(const Circuit &c, const OpenGraph *labels) {
  auto lab = [&](Wire w) -> long {
    return labels ? labels->label(w) : static_cast<long>(w);
  };
  auto list = [&](const auto &ws) {
    nlohmann::json a = nlohmann::json::array();
    for (Wire w : ws) a.push_back(lab(w));
    return a;
  };
  nlohmann::json init = nlohmann::json::object();
  for (Wire w : c.wires)
    init[std::to_string(lab(w))] =
        c.initial.at(w) == WireInit::Plus ? "plus" : "input";
  nlohmann::json gates = nlohmann::json::array();
  for (const Gate &g : c.gates) {
    nlohmann::json j = {{"kind", gate_kind_name(g.kind)}};
    switch (g.kind) {
      case GateKind::J:
        j["wire"] = lab(g.a);
        j["angle"] = angle_to_json(g.angle);
        break;
      case GateKind::Z:
        j["wire"] = lab(g.a);
        break;
      case GateKind::E:
        j["wires"] = {lab(g.a), lab(g.b)};
        break;
      default:
        j["control"] = lab(g.a);
        j["target"] = lab(g.b);
    }
    if (g.tag.kind != SliceKind::None) {
      j["slice"] = {{"kind", slice_kind_name(g.tag.kind)},
                    {"layer", g.tag.layer}};
      if (g.tag.owner != kNoVertex)
        j["slice"]["owner"] = lab(static_cast<Wire>(g.tag.owner));
    }
    gates.push_back(std::move(j));
  }
  return {{"wires", list(c.wires)},   {"initial", init},
          {"gates", gates},           {"measured", list(c.measured)},
          {"inputs", list(c.inputs)}, {"outputs", list(c.outputs)}};
}

Circuit circuit_from_json(const nlohmann::json &j) {
  Circuit c;
  try {
    auto wire = [](const nlohmann::json &x) {
      const long w = x.get<long>();
      if (w < 0) throw InputError("negative wire id");
      return static_cast<Wire>(w);
    };
    for (const auto &w : j.at("wires")) c.wires.push_back(wire(w));
    for (Wire w : c.wires) c.initial[w] = WireInit::Input;
    if (j.contains("initial")) {
      for (const auto &[k, v] : j.at("initial").items()) {
        const Wire w = static_cast<Wire>(std::stol(k));
        if (!c.has_wire(w)) throw InputError("initial state of unknown wire");
        const std::string s = v.get<std::string>();
        if (s == "plus")
          c.initial[w] = WireInit::Plus;
        else if (s == "input")
          c.initial[w] = WireInit::Input;
        else
          throw InputError("unknown preparation " + s);
      }
    }
    for (const auto &g : j.at("gates")) {
      const std::string k = g.at("kind").get<std::string>();
      Gate gt;
      if (k == "J")
        gt = Gate::J(wire(g.at("wire")), angle_from_json(g.at("angle")));
      else if (k == "Z")
        gt = Gate::Z(wire(g.at("wire")));
      else if (k == "E")
        gt = Gate::E(wire(g.at("wires").at(0)), wire(g.at("wires").at(1)));
      else if (k == "CZ")
        gt = Gate::CZ(wire(g.at("control")), wire(g.at("target")));
      else if (k == "CX")
        gt = Gate::CX(wire(g.at("control")), wire(g.at("target")));
      else
        throw InputError("unsupported gate kind " + k);
      if (g.contains("slice")) {
        const auto &s = g.at("slice");
        const std::string sk = s.at("kind").get<std::string>();
        gt.tag.kind = sk == "E"   ? SliceKind::E
                      : sk == "J" ? SliceKind::J
                      : sk == "C" ? SliceKind::C
                                  : SliceKind::None;
        gt.tag.layer = s.value("layer", 0u);
        if (s.contains("owner")) gt.tag.owner = static_cast<int>(wire(s.at("owner")));
      }
      c.gates.push_back(gt);
    }
    if (j.contains("measured"))
      for (const auto &w : j.at("measured")) c.measured.insert(wire(w));
    if (j.contains("inputs")) {
      for (const auto &w : j.at("inputs")) c.inputs.push_back(wire(w));
    } else {
      for (Wire w : c.wires)
        if (c.initial.at(w) == WireInit::Input) c.inputs.push_back(w);
    }
    if (j.contains("outputs")) {
      for (const auto &w : j.at("outputs")) c.outputs.push_back(wire(w));
    } else {
      for (Wire w : c.wires)
        if (!c.measured.count(w)) c.outputs.push_back(w);
    }
  } catch (const nlohmann::json::exception &e) {
    throw InputError(std::string("malformed circuit: ") + e.what());
  }
  c.validate();
  return c;
}

}  // namespace mbqc
