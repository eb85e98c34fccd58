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
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mbqc/angle.hpp"
#include "mbqc/flow.hpp"
#include "mbqc/graph.hpp"

namespace mbqc {

struct Pattern;

using Wire = unsigned;

enum class GateKind { J, E, CZ, CX, Z };

enum class SliceKind { None, E, J, C };

/** Position of a gate in the layered structure of an extended circuit. */
struct SliceTag {
  SliceKind kind = SliceKind::None;
  unsigned layer = 0;
  int owner = kNoVertex;

  bool operator==(const SliceTag &) const = default;
};

/**
 * J and Z use `a`. E uses `a` < `b`. CZ and CX use `a` as control and `b`
 * as target.
 */
struct Gate {
  GateKind kind = GateKind::J;
  Wire a = 0;
  Wire b = 0;
  Angle angle;
  SliceTag tag;
  /** Graph edge a gate descends from, if any. */
  std::optional<std::pair<Wire, Wire>> origin;

  static Gate J(Wire w, Angle angle);
  static Gate E(Wire u, Wire v);
  static Gate CZ(Wire control, Wire target);
  static Gate CX(Wire control, Wire target);
  static Gate Z(Wire w);

  bool two_qubit() const { return kind != GateKind::J && kind != GateKind::Z; }
  bool diagonal() const {
    return kind == GateKind::E || kind == GateKind::CZ || kind == GateKind::Z;
  }
  bool acts_on(Wire w) const { return a == w || (two_qubit() && b == w); }
  /** Same operation on the same wires, ignoring tags and origin. */
  bool same_op(const Gate &o) const;
  std::string str() const;
};

bool gates_commute(const Gate &x, const Gate &y);

enum class WireInit { Input, Plus };

struct Circuit {
  std::vector<Wire> wires;
  std::map<Wire, WireInit> initial;
  std::vector<Gate> gates;
  /** Wires measured in the computational basis at the end. */
  std::set<Wire> measured;
  std::vector<Wire> inputs;
  std::vector<Wire> outputs;

  /** n input wires 0..n-1, all of them outputs. */
  static Circuit on_wires(unsigned n);

  bool has_wire(Wire w) const;
  std::size_t position(Wire w) const;
  void add(const Gate &g);
  /** Throws InputError when the structure is inconsistent. */
  void validate() const;
};

struct CorrectionSlice {
  Wire owner;
  std::vector<std::size_t> gates;
};

struct SliceLayer {
  unsigned layer = 0;
  std::vector<std::size_t> entangling;
  std::vector<std::size_t> jgates;
  std::vector<CorrectionSlice> corrections;
};

/** Layered view over the tags of a circuit, indices into `gates`. */
std::vector<SliceLayer> slices(const Circuit &c);

Circuit extended_translation(const Pattern &p, const GFlow &ssf, const Flow &fl);

bool is_jblock(const Circuit &c, Wire i, Wire fi);

Circuit apply_jgate_identity(const Circuit &c, Wire i, Wire fi);

struct CircuitStats {
  unsigned wires = 0;
  unsigned jgates = 0;
  unsigned jlayers = 0;
  unsigned depth = 0;
  unsigned maxdeg = 0;
};

CircuitStats circuit_stats(const Circuit &c);

std::string to_dot(const Circuit &c);

/** Wire ids are written through `labels` when given. */
nlohmann::json circuit_to_json(
    const Circuit &c, const OpenGraph *labels = nullptr);
Circuit circuit_from_json(const nlohmann::json &j);

}  // namespace mbqc
