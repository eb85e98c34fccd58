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

#include "mbqc/flow.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <sstream>

#include "mbqc/errors.hpp"

namespace mbqc {

unsigned Flow::depth() const {
  unsigned d = 0;
  for (unsigned l : layer) d = std::max(d, l);
  return d;
}

std::vector<int> Flow::inverse() const {
  std::vector<int> inv(f.size(), kNoVertex);
  for (std::size_t v = 0; v < f.size(); ++v) {
    if (f[v] != kNoVertex) inv[f[v]] = static_cast<int>(v);
  }
  return inv;
}

unsigned GFlow::depth() const {
  unsigned d = 0;
  for (unsigned l : layer) d = std::max(d, l);
  return d;
}

std::string Violation::message() const {
  std::ostringstream os;
  os << condition << " violation at " << vertex;
  if (!detail.empty()) os << ": " << detail;
  return os.str();
}

std::optional<Flow> find_flow(const OpenGraph &g) {
  const unsigned n = g.n_vertices();
  std::vector<int> f(n, kNoVertex);
  VertexSet out = g.output_set();
  VertexSet cand = g.output_set() & g.non_inputs();
  while (true) {
    VertexSet out_new = g.empty_set();
    VertexSet used = g.empty_set();
    const VertexSet unprocessed = ~out;
    for (Vertex v : members(cand)) {
      VertexSet s = g.neighbors(v) & unprocessed;
      if (s.count() != 1) continue;
      const Vertex u = static_cast<Vertex>(s.find_first());
      if (out_new.test(u)) continue;
      f[u] = static_cast<int>(v);
      out_new.set(u);
      used.set(v);
    }
    if (out_new.none()) break;
    out |= out_new;
    cand = (cand - used) | (out_new & g.non_inputs());
  }
  if (!out.all()) return std::nullopt;
  Flow fl;
  fl.f = std::move(f);
  fl.layer = flow_layering(g, fl.f);
  return fl;
}

std::vector<unsigned> flow_layering(
    const OpenGraph &g, const std::vector<int> &f) {
  const unsigned n = g.n_vertices();
  std::vector<VertexSet> succ(n, g.empty_set());
  for (Vertex i = 0; i < n; ++i) {
    if (f[i] == kNoVertex) continue;
    const Vertex fi = static_cast<Vertex>(f[i]);
    succ[i].set(fi);
    succ[i] |= g.neighbors(fi);
    succ[i].reset(i);
  }
  // Transitive closure by DFS from each vertex.
  std::vector<VertexSet> reach(n, g.empty_set());
  std::vector<int> state(n, 0);
  std::function<void(Vertex)> visit = [&](Vertex v) {
    state[v] = 1;
    for (Vertex w : members(succ[v])) {
      if (state[w] == 1) {
        throw InvariantError("flow order has a cycle through vertex " +
                             std::to_string(g.label(w)));
      }
      if (state[w] == 0) visit(w);
      reach[v].set(w);
      reach[v] |= reach[w];
    }
    state[v] = 2;
  };
  for (Vertex v = 0; v < n; ++v) {
    if (state[v] == 0) visit(v);
  }
  std::vector<unsigned> layer(n, 0);
  VertexSet remaining(n);
  remaining.set();
  unsigned k = 0;
  while (remaining.any()) {
    VertexSet maximal = g.empty_set();
    for (Vertex v : members(remaining)) {
      if (!(reach[v] & remaining).any()) maximal.set(v);
    }
    for (Vertex v : members(maximal)) layer[v] = k;
    remaining -= maximal;
    ++k;
  }
  return layer;
}

std::vector<Violation> verify_flow(const OpenGraph &g, const Flow &fl) {
  std::vector<Violation> out;
  const unsigned n = g.n_vertices();
  if (fl.f.size() != n || fl.layer.size() != n) {
    out.push_back({"shape", 0, "flow size does not match graph"});
    return out;
  }
  std::vector<int> seen(n, kNoVertex);
  for (Vertex i = 0; i < n; ++i) {
    const int fi = fl.f[i];
    if (g.is_output(i)) {
      if (fi != kNoVertex) out.push_back({"domain", i, "output has a flow"});
      if (fl.layer[i] != 0) {
        out.push_back({"layer", i, "output not at layer 0"});
      }
      continue;
    }
    if (fi == kNoVertex || fi < 0 || static_cast<unsigned>(fi) >= n) {
      out.push_back({"domain", i, "non-output without flow"});
      continue;
    }
    const Vertex v = static_cast<Vertex>(fi);
    if (g.is_input(v)) out.push_back({"codomain", i, "f(i) is an input"});
    if (seen[v] != kNoVertex) {
      out.push_back({"injectivity", i,
                     "shares f with " + std::to_string(seen[v])});
    } else {
      seen[v] = static_cast<int>(i);
    }
    if (!g.has_edge(i, v)) out.push_back({"F3", i, "i not adjacent to f(i)"});
    if (!(fl.layer[i] > fl.layer[v])) {
      out.push_back({"F1", i, "f(i) not later than i"});
    }
    for (Vertex j : members(g.neighbors(v))) {
      if (j != i && !(fl.layer[i] > fl.layer[j])) {
        out.push_back({"F2", i, "neighbour " + std::to_string(j) +
                                    " of f(i) not later than i"});
      }
    }
  }
  return out;
}

std::vector<Violation> verify_gflow(const OpenGraph &g, const GFlow &gf) {
  std::vector<Violation> out;
  const unsigned n = g.n_vertices();
  if (gf.g.size() != n || gf.layer.size() != n) {
    out.push_back({"shape", 0, "gflow size does not match graph"});
    return out;
  }
  for (Vertex i = 0; i < n; ++i) {
    const VertexSet &gi = gf.g[i];
    if (gi.size() != n) {
      out.push_back({"shape", i, "correcting set of wrong size"});
      continue;
    }
    if (g.is_output(i)) {
      if (gi.any()) out.push_back({"domain", i, "output has a correcting set"});
      continue;
    }
    if ((gi & g.input_set()).any()) {
      out.push_back({"codomain", i, "correcting set meets the inputs"});
    }
    for (Vertex j : members(gi)) {
      if (!(gf.layer[i] > gf.layer[j])) {
        out.push_back(
            {"G1", i, "member " + std::to_string(j) + " not later than i"});
      }
    }
    const VertexSet odd = g.odd_neighborhood(gi);
    for (Vertex j : members(odd)) {
      if (j != i && !(gf.layer[i] > gf.layer[j])) {
        out.push_back({"G2", i, "odd neighbour " + std::to_string(j) +
                                    " not later than i"});
      }
    }
    if (!odd.test(i)) out.push_back({"G3", i, "i not in Odd(g(i))"});
  }
  return out;
}

VertexSet z_dependencies(const OpenGraph &g, const Flow &fl, Vertex j) {
  VertexSet nz = g.empty_set();
  for (Vertex k : members(g.non_outputs())) {
    if (k == j || fl.f[k] == kNoVertex) continue;
    if (g.has_edge(static_cast<Vertex>(fl.f[k]), j)) nz.set(k);
  }
  return nz;
}

ZPathParityTable zpath_parities(const Flow &fl, const OpenGraph &g) {
  const unsigned n = g.n_vertices();
  // nz[j] = N_Z(j); targets[k] = vertices receiving a Z from k.
  std::vector<VertexSet> nz(n, g.empty_set());
  std::vector<std::vector<Vertex>> targets(n);
  std::vector<unsigned> indegree(n, 0);
  for (Vertex k = 0; k < n; ++k) {
    if (fl.f[k] == kNoVertex) continue;
    for (Vertex j : members(g.neighbors(static_cast<Vertex>(fl.f[k])))) {
      if (j == k) continue;
      nz[j].set(k);
      targets[k].push_back(j);
      ++indegree[j];
    }
  }
  std::deque<Vertex> ready;
  for (Vertex v = 0; v < n; ++v) {
    if (indegree[v] == 0) ready.push_back(v);
  }
  std::vector<VertexSet> col(n, g.empty_set());
  unsigned done = 0;
  while (!ready.empty()) {
    const Vertex j = ready.front();
    ready.pop_front();
    ++done;
    col[j].set(j);
    for (Vertex k : members(nz[j])) col[j] ^= col[k];
    for (Vertex t : targets[j]) {
      if (--indegree[t] == 0) ready.push_back(t);
    }
  }
  if (done != n) throw InvariantError("Z-dependency graph has a cycle");
  return ZPathParityTable(std::move(col));
}

GFlow ssf_from_flow(const Flow &fl, const OpenGraph &g) {
  const unsigned n = g.n_vertices();
  const ZPathParityTable zeta = zpath_parities(fl, g);
  GFlow gf;
  gf.g.assign(n, g.empty_set());
  for (Vertex j = 0; j < n; ++j) {
    if (fl.f[j] == kNoVertex) continue;
    for (Vertex i : members(zeta.column(j))) {
      if (g.is_output(i)) {
        throw InvariantError("Z-path starts on an output");
      }
      gf.g[i].set(static_cast<Vertex>(fl.f[j]));
    }
  }
  gf.layer.assign(n, 0);
  std::vector<int> state(n, 0);
  std::function<unsigned(Vertex)> depth = [&](Vertex v) -> unsigned {
    if (state[v] == 2) return gf.layer[v];
    if (state[v] == 1) throw InvariantError("correcting sets form a cycle");
    state[v] = 1;
    unsigned l = 0;
    if (!g.is_output(v)) {
      for (Vertex j : members(gf.g[v])) l = std::max(l, depth(j) + 1);
      if (l == 0) {
        throw InvariantError("empty correcting set for vertex " +
                             std::to_string(g.label(v)));
      }
    }
    gf.layer[v] = l;
    state[v] = 2;
    return l;
  };
  for (Vertex v = 0; v < n; ++v) depth(v);
  return gf;
}

std::vector<unsigned> measurement_rounds(
    const OpenGraph &g, const GFlow &gf) {
  const unsigned n = g.n_vertices();
  // pred[v]: measurements v depends on.
  std::vector<VertexSet> pred(n, g.empty_set());
  for (Vertex i : members(g.non_outputs())) {
    VertexSet affected = gf.g[i] | g.odd_neighborhood(gf.g[i]);
    affected.reset(i);
    affected &= g.non_outputs();
    for (Vertex v : members(affected)) pred[v].set(i);
  }
  std::vector<unsigned> round(n, 0);
  std::vector<int> state(n, 0);
  std::function<unsigned(Vertex)> visit = [&](Vertex v) -> unsigned {
    if (state[v] == 2) return round[v];
    if (state[v] == 1) throw InvariantError("measurement dependencies cycle");
    state[v] = 1;
    unsigned r = 1;
    for (Vertex u : members(pred[v])) r = std::max(r, visit(u) + 1);
    round[v] = r;
    state[v] = 2;
    return r;
  };
  for (Vertex v : members(g.non_outputs())) visit(v);
  return round;
}

std::vector<VertexSet> layer_partition(const std::vector<unsigned> &layer) {
  const std::size_t n = layer.size();
  unsigned d = 0;
  for (unsigned l : layer) d = std::max(d, l);
  std::vector<VertexSet> parts(n == 0 ? 0 : d + 1, VertexSet(n));
  for (std::size_t v = 0; v < n; ++v) parts[layer[v]].set(v);
  return parts;
}

namespace {

/** Incremental GF(2) basis with combination tracking. */
class Gf2Basis {
 public:
  Gf2Basis(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

  void insert(VertexSet vec, VertexSet comb) {
    for (std::size_t b = 0; b < vecs_.size(); ++b) {
      if (vec.test(pivots_[b])) {
        vec ^= vecs_[b];
        comb ^= combs_[b];
      }
    }
    const auto p = vec.find_first();
    if (p == VertexSet::npos) return;
    vecs_.push_back(std::move(vec));
    combs_.push_back(std::move(comb));
    pivots_.push_back(p);
  }

  std::optional<VertexSet> solve(VertexSet target) const {
    VertexSet comb(cols_);
    for (std::size_t b = 0; b < vecs_.size(); ++b) {
      if (target.test(pivots_[b])) {
        target ^= vecs_[b];
        comb ^= combs_[b];
      }
    }
    if (target.any()) return std::nullopt;
    return comb;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<VertexSet> vecs_;
  std::vector<VertexSet> combs_;
  std::vector<std::size_t> pivots_;
};

}  // namespace

std::optional<GFlow> max_delayed_gflow(const OpenGraph &g) {
  const unsigned n = g.n_vertices();
  GFlow gf;
  gf.g.assign(n, g.empty_set());
  gf.layer.assign(n, 0);
  VertexSet out = g.output_set();
  unsigned k = 1;
  while (!out.all()) {
    const VertexSet rows = ~out;
    const VertexSet cols = out & g.non_inputs();
    Gf2Basis basis(n, n);
    for (Vertex c : members(cols)) {
      VertexSet comb = g.empty_set();
      comb.set(c);
      basis.insert(g.neighbors(c) & rows, comb);
    }
    VertexSet layer = g.empty_set();
    for (Vertex u : members(rows)) {
      VertexSet e = g.empty_set();
      e.set(u);
      if (auto sol = basis.solve(e)) {
        gf.g[u] = *sol;
        gf.layer[u] = k;
        layer.set(u);
      }
    }
    if (layer.none()) return std::nullopt;
    out |= layer;
    ++k;
  }
  return gf;
}

ReducedOpenGraph reduced_open_graph(
    const OpenGraph &g, const GFlow &ssf, const Flow &fl) {
  if (!verify_flow(g, fl).empty()) {
    throw InputError("flow is not valid on this graph");
  }
  if (!verify_gflow(g, ssf).empty()) {
    throw InputError("signal shifted flow is not a gflow of this graph");
  }
  const unsigned n = g.n_vertices();
  const std::vector<int> inv = fl.inverse();
  VertexSet v1 = g.empty_set();
  for (Vertex v = 0; v < n; ++v) {
    if (!g.is_output(v) && ssf.layer[v] == 1) v1.set(v);
  }
  ReducedOpenGraph r;
  r.removed = g.empty_set();
  for (Vertex v : g.outputs()) {
    if (inv[v] != kNoVertex && v1.test(static_cast<Vertex>(inv[v]))) {
      r.removed.set(v);
    }
  }
  std::vector<int> new_id(n, kNoVertex);
  std::vector<long> labels;
  for (Vertex v = 0; v < n; ++v) {
    if (r.removed.test(v)) continue;
    new_id[v] = static_cast<int>(r.original.size());
    r.original.push_back(v);
    labels.push_back(g.label(v));
  }
  OpenGraph h(static_cast<unsigned>(r.original.size()));
  h.set_labels(labels);
  for (const auto &[a, b] : g.edges()) {
    if (new_id[a] != kNoVertex && new_id[b] != kNoVertex) {
      h.add_edge(static_cast<Vertex>(new_id[a]), static_cast<Vertex>(new_id[b]));
    }
  }
  std::vector<Vertex> in, out;
  for (Vertex v : g.inputs()) in.push_back(static_cast<Vertex>(new_id[v]));
  for (Vertex v : g.outputs()) {
    const Vertex w = r.removed.test(v) ? static_cast<Vertex>(inv[v]) : v;
    out.push_back(static_cast<Vertex>(new_id[w]));
  }
  for (Vertex v : members(v1)) {
    if (!r.removed.test(static_cast<Vertex>(fl.f[v]))) {
      throw InvariantError("last-layer vertex whose flow target stays");
    }
  }
  h.set_inputs(in);
  h.set_outputs(out);
  r.graph = std::move(h);
  return r;
}

std::vector<Vertex> influencing_path(
    const Flow &fl, const GFlow &ssf, const OpenGraph &g, Vertex i,
    Vertex j) {
  if (g.is_output(i) || !ssf.g.at(i).test(j)) {
    throw InputError("vertex " + std::to_string(g.label(j)) +
                     " is not in the correcting set of " +
                     std::to_string(g.label(i)));
  }
  const std::vector<int> inv = fl.inverse();
  const Vertex start = static_cast<Vertex>(fl.f[i]);
  const unsigned n = g.n_vertices();
  std::vector<int> prev(n, kNoVertex);
  VertexSet seen = g.empty_set();
  seen.set(start);
  std::deque<Vertex> queue{start};
  while (!queue.empty()) {
    const Vertex a = queue.front();
    queue.pop_front();
    if (a == j) break;
    for (Vertex b : members(ssf.g[i])) {
      if (seen.test(b) || inv[b] == kNoVertex) continue;
      const Vertex odd = static_cast<Vertex>(inv[b]);
      if (odd == i || !g.has_edge(a, odd)) continue;
      seen.set(b);
      prev[b] = static_cast<int>(a);
      queue.push_back(b);
    }
  }
  if (!seen.test(j)) {
    throw InvariantError("no stepwise influencing path");
  }
  std::vector<Vertex> rev;
  for (Vertex b = j; b != start; b = static_cast<Vertex>(prev[b])) {
    rev.push_back(b);
    rev.push_back(static_cast<Vertex>(inv[b]));
  }
  std::vector<Vertex> path{i, start};
  path.insert(path.end(), rev.rbegin(), rev.rend());
  return path;
}

nlohmann::json flow_to_json(const OpenGraph &g, const Flow &fl) {
  nlohmann::json f = nlohmann::json::object();
  nlohmann::json layers = nlohmann::json::object();
  for (Vertex v = 0; v < g.n_vertices(); ++v) {
    const std::string key = std::to_string(g.label(v));
    if (fl.f[v] != kNoVertex) {
      f[key] = g.label(static_cast<Vertex>(fl.f[v]));
    }
    layers[key] = fl.layer[v];
  }
  return {{"f", f}, {"layers", layers}};
}

nlohmann::json gflow_to_json(const OpenGraph &g, const GFlow &gf) {
  nlohmann::json m = nlohmann::json::object();
  nlohmann::json layers = nlohmann::json::object();
  for (Vertex v = 0; v < g.n_vertices(); ++v) {
    const std::string key = std::to_string(g.label(v));
    if (!g.is_output(v)) {
      std::vector<long> s;
      for (Vertex u : members(gf.g[v])) s.push_back(g.label(u));
      std::sort(s.begin(), s.end());
      m[key] = s;
    }
    layers[key] = gf.layer[v];
  }
  return {{"g", m}, {"layers", layers}};
}

Flow flow_from_json(const OpenGraph &g, const nlohmann::json &j) {
  try {
    Flow fl;
    fl.f.assign(g.n_vertices(), kNoVertex);
    fl.layer.assign(g.n_vertices(), 0);
    for (const auto &[k, v] : j.at("f").items()) {
      fl.f[g.vertex_of(std::stol(k))] =
          static_cast<int>(g.vertex_of(v.get<long>()));
    }
    for (const auto &[k, v] : j.at("layers").items()) {
      fl.layer[g.vertex_of(std::stol(k))] = v.get<unsigned>();
    }
    return fl;
  } catch (const nlohmann::json::exception &e) {
    throw InputError(std::string("malformed flow JSON: ") + e.what());
  }
}

GFlow gflow_from_json(const OpenGraph &g, const nlohmann::json &j) {
  try {
    GFlow gf;
    gf.g.assign(g.n_vertices(), g.empty_set());
    gf.layer.assign(g.n_vertices(), 0);
    for (const auto &[k, v] : j.at("g").items()) {
      VertexSet &s = gf.g[g.vertex_of(std::stol(k))];
      for (long l : v.get<std::vector<long>>()) s.set(g.vertex_of(l));
    }
    for (const auto &[k, v] : j.at("layers").items()) {
      gf.layer[g.vertex_of(std::stol(k))] = v.get<unsigned>();
    }
    return gf;
  } catch (const nlohmann::json::exception &e) {
    throw InputError(std::string("malformed gflow JSON: ") + e.what());
  }
}

}  // namespace mbqc
