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

#include "mbqc/graph.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "mbqc/errors.hpp"

namespace mbqc {

std::vector<Vertex> members(const VertexSet &s) {
  std::vector<Vertex> out;
  out.reserve(s.count());
  for (auto v = s.find_first(); v != VertexSet::npos; v = s.find_next(v)) {
    out.push_back(static_cast<Vertex>(v));
  }
  return out;
}

OpenGraph::OpenGraph(unsigned n)
    : adj_(n, VertexSet(n)), input_set_(n), output_set_(n), labels_(n) {
  for (unsigned v = 0; v < n; ++v) labels_[v] = v;
}

OpenGraph OpenGraph::from_labels(
    const std::vector<long> &labels,
    const std::vector<std::pair<long, long>> &edges,
    const std::vector<long> &inputs, const std::vector<long> &outputs) {
  std::vector<long> sorted = labels;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InputError("duplicate vertex id");
  }
  for (long l : sorted) {
    if (l < 0) throw InputError("vertex ids must be non-negative");
  }
  OpenGraph g(static_cast<unsigned>(sorted.size()));
  g.labels_ = sorted;
  for (const auto &[a, b] : edges) {
    Vertex u = g.vertex_of(a), v = g.vertex_of(b);
    if (u == v) {
      throw InputError("self-loop on vertex " + std::to_string(a));
    }
    if (g.has_edge(u, v)) {
      throw InputError(
          "duplicate edge " + std::to_string(a) + "-" + std::to_string(b));
    }
    g.add_edge(u, v);
  }
  std::vector<Vertex> in, out;
  for (long l : inputs) in.push_back(g.vertex_of(l));
  for (long l : outputs) out.push_back(g.vertex_of(l));
  g.set_inputs(in);
  g.set_outputs(out);
  return g;
}

void OpenGraph::check(Vertex v) const {
  if (v >= n_vertices()) {
    throw InputError("unknown vertex " + std::to_string(v));
  }
}

void OpenGraph::add_edge(Vertex u, Vertex v) {
  check(u);
  check(v);
  if (u == v) throw InputError("self-loop on vertex " + std::to_string(label(u)));
  adj_[u].set(v);
  adj_[v].set(u);
}

void OpenGraph::remove_edge(Vertex u, Vertex v) {
  check(u);
  check(v);
  adj_[u].reset(v);
  adj_[v].reset(u);
}

bool OpenGraph::has_edge(Vertex u, Vertex v) const {
  check(u);
  check(v);
  return adj_[u].test(v);
}

std::vector<Edge> OpenGraph::edges() const {
  std::vector<Edge> out;
  for (Vertex u = 0; u < n_vertices(); ++u) {
    for (Vertex v : members(adj_[u])) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

unsigned OpenGraph::max_degree() const {
  std::size_t d = 0;
  for (const auto &row : adj_) d = std::max(d, row.count());
  return static_cast<unsigned>(d);
}

const VertexSet &OpenGraph::neighbors(Vertex v) const {
  check(v);
  return adj_[v];
}

VertexSet OpenGraph::odd_neighborhood(const VertexSet &k) const {
  if (k.size() != n_vertices()) {
    throw InputError("vertex set does not belong to this graph");
  }
  VertexSet odd(n_vertices());
  for (Vertex v : members(k)) odd ^= adj_[v];
  return odd;
}

void OpenGraph::set_inputs(const std::vector<Vertex> &in) {
  input_set_ = empty_set();
  for (Vertex v : in) {
    check(v);
    if (input_set_.test(v)) throw InputError("repeated input vertex");
    input_set_.set(v);
  }
  inputs_ = in;
}

void OpenGraph::set_outputs(const std::vector<Vertex> &out) {
  output_set_ = empty_set();
  for (Vertex v : out) {
    check(v);
    if (output_set_.test(v)) throw InputError("repeated output vertex");
    output_set_.set(v);
  }
  outputs_ = out;
}

VertexSet OpenGraph::set_of(const std::vector<Vertex> &vs) const {
  VertexSet s = empty_set();
  for (Vertex v : vs) {
    check(v);
    s.set(v);
  }
  return s;
}

long OpenGraph::label(Vertex v) const {
  check(v);
  return labels_[v];
}

Vertex OpenGraph::vertex_of(long label) const {
  auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
  if (it != labels_.end() && *it == label) {
    return static_cast<Vertex>(it - labels_.begin());
  }
  // Labels need not be sorted after relabelling.
  for (Vertex v = 0; v < labels_.size(); ++v) {
    if (labels_[v] == label) return v;
  }
  throw InputError("unknown vertex " + std::to_string(label));
}

void OpenGraph::set_labels(const std::vector<long> &labels) {
  if (labels.size() != n_vertices()) throw InputError("label count mismatch");
  labels_ = labels;
}

std::string OpenGraph::format(const VertexSet &s) const {
  std::vector<long> ls;
  for (Vertex v : members(s)) ls.push_back(label(v));
  std::sort(ls.begin(), ls.end());
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < ls.size(); ++i) os << (i ? "," : "") << ls[i];
  os << "}";
  return os.str();
}

bool OpenGraph::operator==(const OpenGraph &other) const {
  return adj_ == other.adj_ && inputs_ == other.inputs_ &&
         outputs_ == other.outputs_ && labels_ == other.labels_;
}

nlohmann::json graph_to_json(const OpenGraph &g) {
  nlohmann::json j;
  std::vector<long> vs = g.labels();
  std::sort(vs.begin(), vs.end());
  j["vertices"] = vs;
  std::vector<std::pair<long, long>> es;
  for (const auto &[u, v] : g.edges()) {
    long a = g.label(u), b = g.label(v);
    es.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(es.begin(), es.end());
  nlohmann::json ej = nlohmann::json::array();
  for (const auto &[a, b] : es) ej.push_back({a, b});
  j["edges"] = ej;
  std::vector<long> in, out;
  for (Vertex v : g.inputs()) in.push_back(g.label(v));
  for (Vertex v : g.outputs()) out.push_back(g.label(v));
  j["inputs"] = in;
  j["outputs"] = out;
  return j;
}

OpenGraph graph_from_json(const nlohmann::json &j) {
  try {
    std::vector<long> vs = j.at("vertices").get<std::vector<long>>();
    std::vector<std::pair<long, long>> es;
    for (const auto &e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) {
        throw InputError("edge must be a pair of vertex ids");
      }
      es.emplace_back(e[0].get<long>(), e[1].get<long>());
    }
    std::vector<long> in = j.value("inputs", std::vector<long>{});
    std::vector<long> out = j.value("outputs", std::vector<long>{});
    return OpenGraph::from_labels(vs, es, in, out);
  } catch (const nlohmann::json::exception &e) {
    throw InputError(std::string("malformed graph JSON: ") + e.what());
  }
}

}  // namespace mbqc
