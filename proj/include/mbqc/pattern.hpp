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

#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "mbqc/angle.hpp"
#include "mbqc/circuit.hpp"
#include "mbqc/flow.hpp"
#include "mbqc/graph.hpp"

namespace mbqc {

/** Mod-2 sum of measurement outcomes. */
using SignalSet = std::set<Vertex>;

void toggle(SignalSet &s, Vertex v);
SignalSet symmetric_difference(const SignalSet &a, const SignalSet &b);

enum class CommandKind { N, E, M, X, Z, S };

/**
 * N and M use `qubit`; E uses `qubit` and `other`. X, Z and S carry their
 * dependency in `s_domain`. M carries s and t domains.
 */
struct Command {
  CommandKind kind = CommandKind::N;
  Vertex qubit = 0;
  Vertex other = 0;
  Angle angle;
  SignalSet s_domain;
  SignalSet t_domain;

  static Command N(Vertex v);
  static Command E(Vertex u, Vertex v);
  static Command M(Vertex v, Angle a, SignalSet s = {}, SignalSet t = {});
  static Command X(Vertex v, SignalSet s);
  static Command Z(Vertex v, SignalSet s);
  static Command S(Vertex v, SignalSet s);

  bool depends_on(Vertex v) const;
  bool operator==(const Command &) const = default;
};

using AngleMap = std::map<Vertex, Angle>;

struct Pattern {
  OpenGraph space;
  std::vector<Command> commands;
};

/** Runnability problems in execution order; empty when runnable. */
std::vector<std::string> runnability_violations(const Pattern &p);

Pattern pattern_from_circuit(const Circuit &c);

AngleMap angles_of(const Pattern &p);

/** Graph described by the entangling commands of a pattern. */
OpenGraph graph_of(const Pattern &p);

Pattern flow_pattern(const Flow &fl, const OpenGraph &g, const AngleMap &angles);

/** Signal shifted form built directly from the correction sets. */
Pattern ssf_pattern(const GFlow &ssf, const OpenGraph &g, const AngleMap &angles);

Pattern standardize(const Pattern &p);

/**
 * Moves Z dependencies of non-output measurements into signal shifts.
 * When `rng` is given the next vertex is drawn at random among all vertices
 * with a pending Z dependency.
 */
Pattern signal_shift(
    const Pattern &p, const Flow &fl, std::mt19937 *rng = nullptr);

/** Standard form with commands sorted into measurement rounds. */
Pattern canonical(const Pattern &p);

constexpr unsigned kHalfPiRule = 1;
constexpr unsigned kZeroRule = 2;

Pattern pauli_simplify(const Pattern &p, unsigned rules = kHalfPiRule | kZeroRule);

/** Correction sets read off a signal shifted pattern. */
GFlow gflow_of(const Pattern &p);

/** Round of each measured vertex, 1-based; 0 on outputs. */
std::vector<unsigned> pattern_rounds(const Pattern &p);
unsigned pattern_depth(const Pattern &p);

nlohmann::json pattern_to_json(const Pattern &p);
Pattern pattern_from_json(const nlohmann::json &j);

std::string to_string(const Pattern &p);

}  // namespace mbqc
