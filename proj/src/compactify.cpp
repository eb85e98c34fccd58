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

#include "mbqc/compactify.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace mbqc {

namespace {

using Gates = std::vector<Gate>;

std::pair<Wire, Wire> edge_key(Wire u, Wire v) { return std::minmax(u, v); }

std::optional<std::size_t> find_e(const Gates &gs, Wire u, Wire v) {
  const auto key = edge_key(u, v);
  for (std::size_t p = 0; p < gs.size(); ++p)
    if (gs[p].kind == GateKind::E && std::make_pair(gs[p].a, gs[p].b) == key)
      return p;
  return std::nullopt;
}

// Correction gates only; CX gates descending from an E gate are skipped
// unless `any` is set.
std::optional<std::size_t> find_cx(
    const Gates &gs, Wire ctrl, Wire tgt, bool any = false) {
  for (std::size_t p = 0; p < gs.size(); ++p)
    if (gs[p].kind == GateKind::CX && gs[p].a == ctrl && gs[p].b == tgt &&
        (any || !gs[p].origin))
      return p;
  return std::nullopt;
}

std::optional<std::size_t> find_origin_cx(
    const Gates &gs, Wire u, Wire v, Wire ctrl, Wire tgt) {
  const auto key = edge_key(u, v);
  for (std::size_t p = 0; p < gs.size(); ++p)
    if (gs[p].kind == GateKind::CX && gs[p].origin == key && gs[p].a == ctrl &&
        gs[p].b == tgt)
      return p;
  return std::nullopt;
}

bool is_cz_on(const Gate &g, Wire u, Wire v) {
  return g.kind == GateKind::CZ && edge_key(g.a, g.b) == edge_key(u, v);
}

bool is_cx(const Gate &g, Wire ctrl, Wire tgt) {
  return g.kind == GateKind::CX && g.a == ctrl && g.b == tgt;
}

std::string pair_str(Wire a, Wire b) {
  return std::to_string(a) + "," + std::to_string(b);
}

bool touches(const Gate &g, Wire w) { return g.acts_on(w); }

// Z_k X_fk holds right after position q (E_k,fk) and up to, but excluding,
// position p.
bool stabiliser_holds(
    const Circuit &c, std::size_t q, std::size_t p, Wire k, Wire fk) {
  if (c.initial.at(fk) != WireInit::Plus) return false;
  const Gates &gs = c.gates;
  for (std::size_t x = 0; x < q; ++x)
    if (touches(gs[x], fk) && !is_cx(gs[x], gs[x].a, fk)) return false;
  for (std::size_t x = q + 1; x < p; ++x) {
    const Gate &g = gs[x];
    if (touches(g, fk) && !(g.kind == GateKind::CX && g.b == fk)) return false;
    if (touches(g, k)) {
      const bool ok = g.kind == GateKind::Z || g.kind == GateKind::E ||
                      g.kind == GateKind::CZ ||
                      (g.kind == GateKind::CX && g.a == k);
      if (!ok) return false;
    }
  }
  return true;
}

// Moves gate p one step right when it commutes with its neighbour.
bool step_right(Gates &gs, std::size_t p) {
  if (p + 1 >= gs.size() || !gates_commute(gs[p], gs[p + 1])) return false;
  std::swap(gs[p], gs[p + 1]);
  return true;
}

bool step_left(Gates &gs, std::size_t p) {
  if (p == 0 || !gates_commute(gs[p - 1], gs[p])) return false;
  std::swap(gs[p - 1], gs[p]);
  return true;
}

// Rewrites E_jk into CX_j,fk, first rearranging E_jk and E_k,fk by
// commutation so that the stabiliser argument applies.
bool convert_b(Circuit &c, Wire k, Wire fk, Wire j, std::string &why) {
  Gates &gs = c.gates;
  auto q = find_e(gs, k, fk);
  auto p = find_e(gs, k, j);
  if (!q || !p) {
    why = "E gate missing for conversion";
    return false;
  }
  std::size_t qq = *q, pp = *p;
  while (pp < qq) {
    if (!step_right(gs, pp)) break;
    if (pp + 1 == qq) qq = pp;
    ++pp;
  }
  while (qq > pp) {
    if (!step_left(gs, qq)) break;
    if (qq - 1 == pp) pp = qq;
    --qq;
  }
  if (qq > pp) {
    why = "E_" + pair_str(k, fk) + " cannot precede E_" + pair_str(k, j);
    return false;
  }
  if (!stabiliser_holds(c, qq, pp, k, fk)) {
    while (pp > qq + 1 && step_left(gs, pp)) --pp;
    while (qq + 1 < pp && step_right(gs, qq)) ++qq;
  }
  if (!stabiliser_holds(c, qq, pp, k, fk)) {
    why = "no stabiliser for converting E_" + pair_str(k, j);
    return false;
  }
  Gate cx = Gate::CX(j, fk);
  cx.origin = edge_key(k, j);
  gs[pp] = cx;
  return true;
}

struct Push {
  std::size_t pos;
  bool crossed;
};

// Pushes the gate at p to the right by commutation. On meeting CX_{i,j}
// the token crosses it and `emit` is placed right after the token.
Push push_token(Gates &gs, std::size_t p, Wire i, Wire j, const Gate &emit) {
  bool crossed = false;
  while (p + 1 < gs.size()) {
    const Gate &next = gs[p + 1];
    if (!crossed && is_cx(next, i, j)) {
      std::swap(gs[p], gs[p + 1]);
      gs.insert(gs.begin() + static_cast<long>(p) + 2, emit);
      ++p;
      crossed = true;
      continue;
    }
    if (step_right(gs, p)) {
      ++p;
      continue;
    }
    // A correction gate sharing the control may be moved behind CX_{i,j}.
    if (crossed || next.kind != GateKind::CX || next.a != i) break;
    std::size_t q = p + 2;
    while (q < gs.size() && !is_cx(gs[q], i, j) && gates_commute(next, gs[q]))
      ++q;
    if (q >= gs.size() || !is_cx(gs[q], i, j) || !gates_commute(next, gs[q]))
      break;
    std::rotate(gs.begin() + static_cast<long>(p) + 1,
                gs.begin() + static_cast<long>(p) + 2,
                gs.begin() + static_cast<long>(q) + 1);
  }
  return {p, crossed};
}

// Cancels gates matching `pred` in pairs by moving later ones leftwards.
// A CZ_ik moving left across CX_ik leaves a Z_i behind it.
bool gather_and_cancel(
    Circuit &c, const std::function<bool(const Gate &)> &pred, Wire i, Wire k,
    bool cz_rule, const SliceTag &tag, TraceEvent &ev, std::string &why) {
  Gates &gs = c.gates;
  for (;;) {
    std::vector<std::size_t> at;
    for (std::size_t p = 0; p < gs.size(); ++p)
      if (pred(gs[p])) at.push_back(p);
    if (at.empty()) return true;
    if (at.size() == 1) {
      why = "unpaired " + gs[at[0]].str();
      return false;
    }
    std::size_t q = at.back();
    const std::size_t target = at[at.size() - 2];
    while (q > target + 1) {
      const Gate &prev = gs[q - 1];
      if (cz_rule && is_cx(prev, i, k)) {
        Gate z = Gate::Z(i);
        z.tag = tag;
        std::swap(gs[q - 1], gs[q]);
        gs.insert(gs.begin() + static_cast<long>(q) - 1, z);
        ev.cleanup.push_back("z_emitted " + std::to_string(i));
        continue;  // CZ now sits at q, Z_i at q - 1
      }
      if (!step_left(gs, q)) {
        why = "cannot gather " + gs[q].str() + " past " + prev.str();
        return false;
      }
      --q;
    }
    ev.cleanup.push_back(std::string(cz_rule ? "cz_cancel " : "cx_cancel ") +
                         pair_str(gs[target].a, gs[target].b));
    gs.erase(gs.begin() + static_cast<long>(q));
    gs.erase(gs.begin() + static_cast<long>(target));
  }
}

void drop_trailing_z(Circuit &c, Wire i, TraceEvent &ev) {
  Gates &gs = c.gates;
  for (std::size_t p = gs.size(); p-- > 0;) {
    if (gs[p].kind != GateKind::Z || gs[p].a != i) continue;
    std::size_t q = p;
    while (step_right(gs, q)) ++q;
    bool last = true;
    for (std::size_t x = q + 1; x < gs.size(); ++x)
      if (gs[x].acts_on(i)) last = false;
    if (last && c.measured.count(i)) {
      gs.erase(gs.begin() + static_cast<long>(q));
      ev.cleanup.push_back("trailing_z_drop " + std::to_string(i));
    }
  }
}

RPResult fail(RPResult r, std::string why) {
  r.ok = false;
  r.reason = std::move(why);
  return r;
}

RPResult begin(const Circuit &c, RPKind kind, Wire i, Wire k,
               const CompactifyContext &ctx) {
  RPResult r;
  r.circuit = c;
  r.event.kind = TraceEvent::Kind::RP;
  r.event.rp = kind;
  r.event.target = i;
  r.event.neighbor = k;
  r.event.layer = ctx.round.at(i);
  return r;
}

}  // namespace

Circuit rewrite_identity(
    Identity kind, const Circuit &c, const std::vector<std::size_t> &site) {
  Circuit r = c;
  Gates &gs = r.gates;
  auto bad = [](const char *what) {
    throw InputError(std::string("identity site mismatch: ") + what);
  };
  for (std::size_t p : site)
    if (p >= gs.size()) bad("position out of range");
  for (std::size_t x = 1; x < site.size(); ++x)
    if (site[x] <= site[x - 1]) bad("positions not ascending");
  auto other = [](const Gate &g, Wire w) { return g.a == w ? g.b : g.a; };
  switch (kind) {
    case Identity::A: {
      if (site.size() != 3 || site[1] != site[0] + 1 || site[2] != site[1] + 1)
        bad("A needs three adjacent gates");
      const Gate x = gs[site[0]], e = gs[site[1]];
      if (x.kind != GateKind::CX || e.kind != GateKind::E ||
          !gs[site[2]].same_op(x) || !e.acts_on(x.b) || e.acts_on(x.a))
        bad("A expects CX_ij E_kj CX_ij");
      Gate cz = Gate::CZ(x.a, other(e, x.b));
      gs.erase(gs.begin() + static_cast<long>(site[2]));
      gs.erase(gs.begin() + static_cast<long>(site[0]));
      gs.insert(gs.begin() + static_cast<long>(site[0]) + 1, cz);
      break;
    }
    case Identity::B: {
      if (site.size() != 2) bad("B needs two gates");
      const Gate e1 = gs[site[0]], e2 = gs[site[1]];
      if (e1.kind != GateKind::E || e2.kind != GateKind::E) bad("B expects E E");
      Wire k;
      if (e2.acts_on(e1.a) && !e2.acts_on(e1.b))
        k = e1.a;
      else if (e2.acts_on(e1.b) && !e2.acts_on(e1.a))
        k = e1.b;
      else
        bad("B expects gates sharing one wire");
      const Wire fk = other(e1, k), j = other(e2, k);
      if (!stabiliser_holds(r, site[0], site[1], k, fk))
        bad("B stabiliser does not hold");
      Gate cx = Gate::CX(j, fk);
      cx.origin = e2.origin;
      cx.tag = e2.tag;
      gs[site[1]] = cx;
      break;
    }
    case Identity::C: {
      if (site.size() != 3 || site[1] != site[0] + 1 || site[2] != site[1] + 1)
        bad("C needs three adjacent gates");
      const Gate x = gs[site[0]], y = gs[site[1]];
      if (x.kind != GateKind::CX || y.kind != GateKind::CX ||
          !gs[site[2]].same_op(x) || x.b != y.a || x.a == y.b)
        bad("C expects CX_ca CX_ab CX_ca");
      Gate cb = Gate::CX(x.a, y.b);
      gs.erase(gs.begin() + static_cast<long>(site[2]));
      gs.erase(gs.begin() + static_cast<long>(site[0]));
      gs.insert(gs.begin() + static_cast<long>(site[0]) + 1, cb);
      break;
    }
    case Identity::D: {
      if (site.size() != 2 || site[1] != site[0] + 1)
        bad("D needs two adjacent gates");
      const Gate e = gs[site[0]], x = gs[site[1]];
      if (e.kind != GateKind::E || x.kind != GateKind::CX || !e.acts_on(x.b) ||
          e.acts_on(x.a))
        bad("D expects E_kj CX_ij");
      std::swap(gs[site[0]], gs[site[1]]);
      gs.insert(gs.begin() + static_cast<long>(site[1]) + 1,
                Gate::CZ(x.a, other(e, x.b)));
      break;
    }
    case Identity::E: {
      if (site.size() != 2 || site[1] != site[0] + 1)
        bad("E needs two adjacent gates");
      const Gate x = gs[site[0]], y = gs[site[1]];
      if (x.kind != GateKind::CX || y.kind != GateKind::CX || y.b != x.a ||
          y.a == x.b)
        bad("E expects CX_ab CX_ca");
      std::swap(gs[site[0]], gs[site[1]]);
      gs.insert(gs.begin() + static_cast<long>(site[1]) + 1,
                Gate::CX(y.a, x.b));
      break;
    }
  }
  return r;
}

const char *rp_name(RPKind k) {
  switch (k) {
    case RPKind::RP1: return "RP1";
    case RPKind::RP2: return "RP2";
    case RPKind::RP3: return "RP3";
    case RPKind::Abort: return "Abort";
  }
  return "?";
}

std::vector<VertexSet> effective_corrections(const Circuit &c, unsigned n) {
  std::vector<VertexSet> s(n, VertexSet(n));
  for (const Gate &g : c.gates)
    if (g.kind == GateKind::CX && g.tag.kind == SliceKind::C &&
        g.tag.owner == static_cast<int>(g.a) && g.a < n && g.b < n)
      s[g.a].set(g.b);
  return s;
}

CompactifyContext make_context(
    const Circuit &c, const OpenGraph &g, const Flow &fl) {
  const unsigned n = g.n_vertices();
  CompactifyContext ctx;
  ctx.graph = g;
  ctx.flow = fl;
  ctx.s = effective_corrections(c, n);
  ctx.round.assign(n, kNeverMeasured);
  for (const Gate &gt : c.gates) {
    if (gt.kind != GateKind::J) continue;
    if (gt.tag.kind != SliceKind::J || gt.a >= n)
      throw InputError("J gate without layer tag: " + gt.str());
    ctx.round[gt.a] = gt.tag.layer;
  }
  for (Vertex v : members(g.non_outputs()))
    if (ctx.round[v] == kNeverMeasured)
      throw InputError("measured wire " + std::to_string(g.label(v)) +
                       " has no J gate");
  return ctx;
}

RPResult rp1(const Circuit &c, const CompactifyContext &ctx, Wire i, Wire k) {
  RPResult r = begin(c, RPKind::RP1, i, k, ctx);
  Gates &gs = r.circuit.gates;
  if (ctx.round.at(k) <= ctx.round.at(i))
    return fail(r, "neighbour is not measured later than the target");
  const SliceTag tag{SliceKind::C, ctx.round[i], static_cast<int>(i)};
  const VertexSet js = ctx.s.at(i) & ctx.graph.neighbors(k);
  std::vector<Wire> todo;
  for (Vertex j : members(js)) {
    r.event.correcting.push_back(j);
    const auto cx = find_cx(gs, i, j);
    if (!cx) return fail(r, "missing CX_" + pair_str(i, j));
    const auto e = find_e(gs, k, j);
    if (!e) return fail(r, "E_" + pair_str(k, j) + " is no longer available");
    if (*e < *cx) todo.push_back(j);
  }
  // Latest token first so earlier tokens never have to pass a later one.
  std::sort(todo.begin(), todo.end(), [&](Wire x, Wire y) {
    return *find_e(gs, k, x) > *find_e(gs, k, y);
  });
  for (Wire j : todo) {
    Gate cz = Gate::CZ(i, k);
    cz.tag = tag;
    const Push p = push_token(gs, *find_e(gs, k, j), i, j, cz);
    if (!p.crossed)
      return fail(r, "E_" + pair_str(k, j) + " blocked before CX_" +
                         pair_str(i, j) + " by " +
                         (p.pos + 1 < gs.size() ? gs[p.pos + 1].str() : "end"));
    r.event.used_e.push_back(edge_key(k, j));
  }
  std::string why;
  if (!gather_and_cancel(
          r.circuit, [&](const Gate &g) { return is_cz_on(g, i, k); }, i, k,
          true, tag, r.event, why))
    return fail(r, why);
  drop_trailing_z(r.circuit, i, r.event);
  r.ok = true;
  return r;
}

namespace {

RPResult rp23(RPKind kind, const Circuit &c, const CompactifyContext &ctx,
              Wire i, Wire k) {
  RPResult r = begin(c, kind, i, k, ctx);
  Gates &gs = r.circuit.gates;
  if (ctx.round.at(k) > ctx.round.at(i))
    return fail(r, "neighbour is measured later than the target");
  if (ctx.flow.f.at(k) == kNoVertex) return fail(r, "neighbour has no flow");
  const Wire fk = static_cast<Wire>(ctx.flow.f[k]);
  const bool fk_in = ctx.s.at(i).test(fk);
  if (fk_in != (kind == RPKind::RP2))
    return fail(r, kind == RPKind::RP2 ? "f(k) is not corrected by the target"
                                       : "f(k) is corrected by the target");
  const SliceTag tag{SliceKind::C, ctx.round[i], static_cast<int>(i)};
  VertexSet js = ctx.s.at(i) & ctx.graph.neighbors(k);
  js.reset(fk);
  std::string why;
  for (Vertex j : members(js)) {
    r.event.correcting.push_back(j);
    const auto cx = find_cx(gs, i, j);
    if (!cx) return fail(r, "missing CX_" + pair_str(i, j));
    if (const auto e = find_e(gs, k, j)) {
      if (*e > *cx) continue;
      if (!convert_b(r.circuit, k, fk, j, why)) return fail(r, why);
      r.event.consumed_e.push_back(edge_key(k, j));
      r.event.created_cx.emplace_back(j, fk);
    } else if (!find_origin_cx(gs, k, j, j, fk) && !find_cx(gs, j, fk, true)) {
      return fail(r, "neither E_" + pair_str(k, j) + " nor CX_" +
                         pair_str(j, fk) + " is available");
    }
  }
  // Token for j: the CX descending from E_kj, else any CX_j,fk.
  auto token = [&](Wire j) -> std::optional<std::size_t> {
    if (auto p = find_origin_cx(gs, k, j, j, fk)) return p;
    return find_cx(gs, j, fk, true);
  };
  std::vector<Wire> todo;
  for (Vertex j : members(js))
    if (*token(j) < *find_cx(gs, i, j)) todo.push_back(j);
  std::sort(todo.begin(), todo.end(),
            [&](Wire x, Wire y) { return *token(x) > *token(y); });
  for (Wire j : todo) {
    Gate cx = Gate::CX(i, fk);
    cx.tag = tag;
    const Push p = push_token(gs, *token(j), i, j, cx);
    if (!p.crossed)
      return fail(r, "CX_" + pair_str(j, fk) + " blocked before CX_" +
                         pair_str(i, j) + " by " +
                         (p.pos + 1 < gs.size() ? gs[p.pos + 1].str() : "end"));
  }
  if (!gather_and_cancel(
          r.circuit,
          [&](const Gate &g) { return is_cx(g, i, fk) && !g.origin; }, i, fk,
          false, tag, r.event, why))
    return fail(r, why);
  r.ok = true;
  return r;
}

}  // namespace

RPResult rp2(const Circuit &c, const CompactifyContext &ctx, Wire i, Wire k) {
  return rp23(RPKind::RP2, c, ctx, i, k);
}

RPResult rp3(const Circuit &c, const CompactifyContext &ctx, Wire i, Wire k) {
  return rp23(RPKind::RP3, c, ctx, i, k);
}

RPResult apply_rp(RPKind kind, const Circuit &c, const CompactifyContext &ctx,
                  Wire i, Wire k) {
  switch (kind) {
    case RPKind::RP1: return rp1(c, ctx, i, k);
    case RPKind::RP2: return rp2(c, ctx, i, k);
    case RPKind::RP3: return rp3(c, ctx, i, k);
    case RPKind::Abort: break;
  }
  RPResult r;
  r.circuit = c;
  r.reason = "abort";
  return r;
}

namespace {

RPKind candidate(const CompactifyContext &ctx, Wire i, Wire k) {
  if (ctx.round.at(k) > ctx.round.at(i)) return RPKind::RP1;
  if (ctx.flow.f.at(k) == kNoVertex) return RPKind::Abort;
  return ctx.s.at(i).test(static_cast<Wire>(ctx.flow.f[k])) ? RPKind::RP2
                                                             : RPKind::RP3;
}

}  // namespace

RPKind choose_rp(
    const Circuit &c, const CompactifyContext &ctx, Wire i, Wire k) {
  const RPKind kind = candidate(ctx, i, k);
  if (kind == RPKind::Abort) return kind;
  return apply_rp(kind, c, ctx, i, k).ok ? kind : RPKind::Abort;
}

namespace {

bool remove_one_cx_on_plus(Circuit &c, const Flow &fl, TraceEvent &ev) {
  Gates &gs = c.gates;
  for (std::size_t p = 0; p < gs.size(); ++p) {
    const Gate &g = gs[p];
    if (g.kind != GateKind::CX) continue;
    if (g.a < fl.f.size() && fl.f[g.a] == static_cast<int>(g.b)) continue;
    if (c.initial.at(g.b) != WireInit::Plus) continue;
    bool first = true;
    for (std::size_t x = 0; x < p; ++x)
      if (gs[x].acts_on(g.b)) first = false;
    if (!first) continue;
    ev.kind = TraceEvent::Kind::CxPlusRemoval;
    ev.target = g.a;
    ev.neighbor = g.b;
    gs.erase(gs.begin() + static_cast<long>(p));
    return true;
  }
  return false;
}

bool remove_cx_on_plus(Circuit &c, Wire a, Wire b, const Flow &fl) {
  Gates &gs = c.gates;
  for (std::size_t p = 0; p < gs.size(); ++p) {
    if (!is_cx(gs[p], a, b)) continue;
    if (a < fl.f.size() && fl.f[a] == static_cast<int>(b)) return false;
    if (c.initial.at(b) != WireInit::Plus) return false;
    for (std::size_t x = 0; x < p; ++x)
      if (gs[x].acts_on(b)) return false;
    gs.erase(gs.begin() + static_cast<long>(p));
    return true;
  }
  return false;
}

bool settle(Circuit &c, Wire i, Wire fi) {
  Gates &gs = c.gates;
  const auto e = find_e(gs, i, fi);
  if (!e) return false;
  std::size_t p = *e;
  while (step_right(gs, p)) ++p;
  return p != *e;
}

std::vector<Vertex> flow_earliest_first(const OpenGraph &g, const Flow &fl) {
  std::vector<Vertex> order = members(g.non_outputs());
  std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) {
    return fl.layer[a] > fl.layer[b];
  });
  return order;
}

}  // namespace

CompactifyResult compactify(
    const Circuit &c, const OpenGraph &g, const Flow &fl, const GFlow &ssf,
    const CompactifyOptions &opts) {
  c.validate();
  const unsigned n = g.n_vertices();
  if (c.wires.size() != n)
    throw InputError("extended circuit needs one wire per vertex");
  CompactifyContext ctx = make_context(c, g, fl);
  if (!opts.partial) {
    for (Vertex v : members(g.non_outputs()))
      if (ctx.s[v] != ssf.g.at(v))
        throw InputError(
            "correction slice of wire " + std::to_string(g.label(v)) +
            " differs from the signal shifted flow (Pauli-simplified input "
            "needs partial mode)");
  }
  CompactifyResult res;
  res.circuit = c;
  Circuit &cur = res.circuit;
  auto by_lf = [&](std::vector<Vertex> &vs) {
    std::sort(vs.begin(), vs.end(), [&](Vertex a, Vertex b) {
      if (fl.layer[a] != fl.layer[b]) return fl.layer[a] < fl.layer[b];
      return a < b;
    });
  };
  unsigned depth = 0;
  for (Vertex v : members(g.non_outputs())) depth = std::max(depth, ctx.round[v]);
  for (unsigned layer = 1; layer <= depth; ++layer) {
    std::vector<Vertex> targets;
    for (Vertex v : members(g.non_outputs()))
      if (ctx.round[v] == layer) targets.push_back(v);
    by_lf(targets);
    for (Vertex i : targets) {
      VertexSet nb = g.empty_set();
      for (Vertex j : members(ctx.s[i])) nb |= g.neighbors(j);
      nb.reset(i);
      std::vector<Vertex> ks = members(nb);
      by_lf(ks);
      for (Vertex k : ks) {
        if (fl.layer[k] >= fl.layer[i] && !opts.partial)
          throw InvariantError(
              "neighbour " + std::to_string(g.label(k)) +
              " is not later in the flow order than target " +
              std::to_string(g.label(i)));
        const RPKind kind = candidate(ctx, i, k);
        RPResult r = apply_rp(kind, cur, ctx, i, k);
        if (!r.ok) {
          if (opts.partial) {
            ++res.aborted;
            continue;
          }
          throw CompactifyAbort(
              "rewrite procedure aborted at target " +
                  std::to_string(g.label(i)) + ", neighbour " +
                  std::to_string(g.label(k)) + ": " + r.reason,
              res.trace);
        }
        cur = std::move(r.circuit);
        res.trace.events.push_back(std::move(r.event));
      }
    }
  }
  for (;;) {
    TraceEvent ev;
    if (!remove_one_cx_on_plus(cur, fl, ev)) break;
    res.trace.events.push_back(ev);
  }
  const std::vector<Vertex> order = flow_earliest_first(g, fl);
  for (Vertex i : order) {
    const Wire fi = static_cast<Wire>(fl.f[i]);
    if (settle(cur, i, fi)) {
      TraceEvent ev;
      ev.kind = TraceEvent::Kind::Settle;
      ev.target = i;
      ev.neighbor = fi;
      res.trace.events.push_back(ev);
    }
  }
  for (Vertex i : order) {
    const Wire fi = static_cast<Wire>(fl.f[i]);
    if (!is_jblock(cur, i, fi)) {
      if (opts.partial) {
        ++res.skipped_blocks;
        continue;
      }
      throw CompactifyAbort("no J-block on wires " +
                                std::to_string(g.label(i)) + "," +
                                std::to_string(g.label(fi)),
                            res.trace);
    }
    cur = apply_jgate_identity(cur, i, fi);
    TraceEvent ev;
    ev.kind = TraceEvent::Kind::JGate;
    ev.target = i;
    ev.neighbor = fi;
    res.trace.events.push_back(ev);
  }
  return res;
}

Circuit replay(const Circuit &c, const OpenGraph &g, const Flow &fl,
               const CompactifyTrace &trace) {
  const CompactifyContext ctx = make_context(c, g, fl);
  Circuit cur = c;
  for (const TraceEvent &ev : trace.events) {
    switch (ev.kind) {
      case TraceEvent::Kind::RP: {
        RPResult r = apply_rp(ev.rp, cur, ctx, ev.target, ev.neighbor);
        if (!r.ok) throw InvariantError("replay failed: " + r.reason);
        cur = std::move(r.circuit);
        break;
      }
      case TraceEvent::Kind::CxPlusRemoval:
        if (!remove_cx_on_plus(cur, ev.target, ev.neighbor, fl))
          throw InvariantError("replay failed: CX_" +
                               pair_str(ev.target, ev.neighbor) +
                               " is not removable");
        break;
      case TraceEvent::Kind::Settle:
        settle(cur, ev.target, ev.neighbor);
        break;
      case TraceEvent::Kind::JGate:
        cur = apply_jgate_identity(cur, ev.target, ev.neighbor);
        break;
    }
  }
  return cur;
}

std::vector<std::string> trace_violations(const CompactifyTrace &trace) {
  std::vector<std::string> out;
  std::set<std::pair<Wire, Wire>> consumed;
  std::set<std::pair<Wire, Wire>> created;
  for (const TraceEvent &ev : trace.events) {
    if (ev.kind != TraceEvent::Kind::RP) continue;
    for (const auto &e : ev.used_e)
      if (consumed.count(e))
        out.push_back("E_" + pair_str(e.first, e.second) +
                      " used after it was consumed");
    if (ev.consumed_e.size() != ev.created_cx.size())
      out.push_back("consumed and created gates are not paired");
    for (std::size_t x = 0; x < ev.consumed_e.size(); ++x) {
      const auto &e = ev.consumed_e[x];
      if (!consumed.insert(e).second)
        out.push_back("E_" + pair_str(e.first, e.second) + " consumed twice");
      if (x < ev.created_cx.size() && !created.insert(ev.created_cx[x]).second)
        out.push_back("CX_" +
                      pair_str(ev.created_cx[x].first, ev.created_cx[x].second) +
                      " created from two E gates");
    }
  }
  return out;
}

namespace {

const char *event_name(TraceEvent::Kind k) {
  switch (k) {
    case TraceEvent::Kind::RP: return "rp";
    case TraceEvent::Kind::CxPlusRemoval: return "cx_plus_removal";
    case TraceEvent::Kind::Settle: return "settle";
    case TraceEvent::Kind::JGate: return "jgate";
  }
  return "?";
}

}  // namespace

nlohmann::json trace_to_json(const CompactifyTrace &t, const OpenGraph *labels) {
  auto lab = [&](Wire w) -> long {
    return labels ? labels->label(w) : static_cast<long>(w);
  };
  auto pairs = [&](const std::vector<std::pair<Wire, Wire>> &ps) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto &[x, y] : ps) a.push_back({lab(x), lab(y)});
    return a;
  };
  nlohmann::json events = nlohmann::json::array();
  for (const TraceEvent &ev : t.events) {
    nlohmann::json j = {{"event", event_name(ev.kind)}};
    if (ev.kind == TraceEvent::Kind::RP) {
      j["procedure"] = rp_name(ev.rp);
      j["target"] = lab(ev.target);
      j["neighbor"] = lab(ev.neighbor);
      j["layer"] = ev.layer;
      nlohmann::json cw = nlohmann::json::array();
      for (Wire w : ev.correcting) cw.push_back(lab(w));
      j["correcting"] = cw;
      j["used_e"] = pairs(ev.used_e);
      j["consumed_e"] = pairs(ev.consumed_e);
      j["created_cx"] = pairs(ev.created_cx);
      j["cleanup"] = ev.cleanup;
    } else {
      j["wires"] = {lab(ev.target), lab(ev.neighbor)};
    }
    events.push_back(std::move(j));
  }
  return {{"events", events}};
}

CompactifyTrace trace_from_json(const nlohmann::json &j, const OpenGraph *labels) {
  auto wire = [&](const nlohmann::json &x) -> Wire {
    const long l = x.get<long>();
    return labels ? labels->vertex_of(l) : static_cast<Wire>(l);
  };
  auto pairs = [&](const nlohmann::json &a) {
    std::vector<std::pair<Wire, Wire>> ps;
    for (const auto &p : a) ps.emplace_back(wire(p.at(0)), wire(p.at(1)));
    return ps;
  };
  CompactifyTrace t;
  try {
    for (const auto &e : j.at("events")) {
      TraceEvent ev;
      const std::string name = e.at("event").get<std::string>();
      if (name == "rp") {
        ev.kind = TraceEvent::Kind::RP;
        const std::string p = e.at("procedure").get<std::string>();
        ev.rp = p == "RP1"   ? RPKind::RP1
                : p == "RP2" ? RPKind::RP2
                : p == "RP3" ? RPKind::RP3
                             : RPKind::Abort;
        ev.target = wire(e.at("target"));
        ev.neighbor = wire(e.at("neighbor"));
        ev.layer = e.value("layer", 0u);
        for (const auto &w : e.value("correcting", nlohmann::json::array()))
          ev.correcting.push_back(wire(w));
        ev.used_e = pairs(e.value("used_e", nlohmann::json::array()));
        ev.consumed_e = pairs(e.value("consumed_e", nlohmann::json::array()));
        ev.created_cx = pairs(e.value("created_cx", nlohmann::json::array()));
        ev.cleanup = e.value("cleanup", std::vector<std::string>{});
      } else {
        ev.kind = name == "cx_plus_removal" ? TraceEvent::Kind::CxPlusRemoval
                  : name == "settle"        ? TraceEvent::Kind::Settle
                  : name == "jgate"         ? TraceEvent::Kind::JGate
                                            : throw InputError(
                                                  "unknown trace event " + name);
        ev.target = wire(e.at("wires").at(0));
        ev.neighbor = wire(e.at("wires").at(1));
      }
      t.events.push_back(std::move(ev));
    }
  } catch (const nlohmann::json::exception &e) {
    throw InputError(std::string("malformed trace: ") + e.what());
  }
  return t;
}

ExtendedInput recover_extended(const Circuit &labelled) {
  labelled.validate();
  std::vector<long> labels(labelled.wires.begin(), labelled.wires.end());
  std::sort(labels.begin(), labels.end());
  std::vector<std::pair<long, long>> edges;
  for (const Gate &g : labelled.gates)
    if (g.kind == GateKind::E) edges.emplace_back(g.a, g.b);
  std::vector<long> in(labelled.inputs.begin(), labelled.inputs.end());
  std::vector<long> out(labelled.outputs.begin(), labelled.outputs.end());
  ExtendedInput x;
  x.graph = OpenGraph::from_labels(labels, edges, in, out);
  const OpenGraph &g = x.graph;
  auto id = [&](Wire w) { return g.vertex_of(static_cast<long>(w)); };
  Circuit &c = x.circuit;
  for (Vertex v = 0; v < g.n_vertices(); ++v) {
    c.wires.push_back(v);
    c.initial[v] = labelled.initial.at(static_cast<Wire>(g.label(v)));
  }
  for (Gate gt : labelled.gates) {
    gt.a = id(gt.a);
    if (gt.two_qubit()) gt.b = id(gt.b);
    if (gt.kind == GateKind::E) {
      if (gt.a > gt.b) std::swap(gt.a, gt.b);
      gt.origin = edge_key(gt.a, gt.b);
    } else if (gt.origin) {
      gt.origin = edge_key(id(gt.origin->first), id(gt.origin->second));
    }
    if (gt.tag.owner != kNoVertex)
      gt.tag.owner = static_cast<int>(id(static_cast<Wire>(gt.tag.owner)));
    c.gates.push_back(gt);
  }
  for (Wire w : labelled.measured) c.measured.insert(id(w));
  c.inputs = g.inputs();
  c.outputs = g.outputs();
  const auto fl = find_flow(g);
  if (!fl) throw InputError("graph of the extended circuit has no flow");
  x.flow = *fl;
  x.ssf = ssf_from_flow(*fl, g);
  return x;
}

}  // namespace mbqc
