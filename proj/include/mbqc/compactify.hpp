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

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "mbqc/circuit.hpp"
#include "mbqc/errors.hpp"
#include "mbqc/flow.hpp"
#include "mbqc/graph.hpp"

namespace mbqc {

/**
 * Local circuit identities, all in time order:
 *   A  [CX_ij, E_kj, CX_ij]  -> [E_kj, CZ_ik]
 *   B  E_jk after E_k,fk     -> CX_j,fk   (needs the Z_k X_fk stabiliser)
 *   C  [CX_ca, CX_ab, CX_ca] -> [CX_ab, CX_cb]
 *   D  [E_kj, CX_ij]         -> [CX_ij, E_kj, CZ_ik]
 *   E  [CX_ab, CX_ca]        -> [CX_ca, CX_ab, CX_cb]
 */
enum class Identity { A, B, C, D, E };

/**
 * Rewrites the gates at `site` (ascending positions). For B the site is the
 * positions of E_k,fk and E_jk. Throws InputError on a mismatch.
 */
Circuit rewrite_identity(
    Identity kind, const Circuit &c, const std::vector<std::size_t> &site);

enum class RPKind { RP1, RP2, RP3, Abort };

const char *rp_name(RPKind k);

constexpr unsigned kNeverMeasured = std::numeric_limits<unsigned>::max();

/** Graph data the rewrite procedures consult. Wires are vertex ids. */
struct CompactifyContext {
  OpenGraph graph;
  Flow flow;
  /** Correction sets read from the correction slices. */
  std::vector<VertexSet> s;
  /** J layer of each measured wire; kNeverMeasured on outputs. */
  std::vector<unsigned> round;
};

CompactifyContext make_context(
    const Circuit &c, const OpenGraph &g, const Flow &fl);

/** Targets of the CX gates in each wire's correction slice. */
std::vector<VertexSet> effective_corrections(const Circuit &c, unsigned n);

struct TraceEvent {
  enum class Kind { RP, CxPlusRemoval, Settle, JGate };
  Kind kind = Kind::RP;
  RPKind rp = RPKind::Abort;
  /** RP: target and neighbour wires. Otherwise the wires acted on. */
  Wire target = 0;
  Wire neighbor = 0;
  unsigned layer = 0;
  std::vector<Wire> correcting;
  /** E gates moved past the correction slice. */
  std::vector<std::pair<Wire, Wire>> used_e;
  /** E gates turned into CX, index-aligned with created_cx. */
  std::vector<std::pair<Wire, Wire>> consumed_e;
  std::vector<std::pair<Wire, Wire>> created_cx;
  std::vector<std::string> cleanup;
};

struct CompactifyTrace {
  std::vector<TraceEvent> events;
};

struct RPResult {
  bool ok = false;
  std::string reason;
  Circuit circuit;
  TraceEvent event;
};

RPResult rp1(const Circuit &c, const CompactifyContext &ctx, Wire i, Wire k);
RPResult rp2(const Circuit &c, const CompactifyContext &ctx, Wire i, Wire k);
RPResult rp3(const Circuit &c, const CompactifyContext &ctx, Wire i, Wire k);
RPResult apply_rp(
    RPKind kind, const Circuit &c, const CompactifyContext &ctx, Wire i,
    Wire k);

/** Procedure that applies to (i, k) in the current circuit, or Abort. */
RPKind choose_rp(
    const Circuit &c, const CompactifyContext &ctx, Wire i, Wire k);

struct CompactifyOptions {
  /**
   * Accept circuits whose correction slices differ from the signal shifted
   * flow, skipping aborted procedures and wires that never form a J-block.
   */
  bool partial = false;
};

struct CompactifyResult {
  Circuit circuit;
  CompactifyTrace trace;
  unsigned aborted = 0;
  unsigned skipped_blocks = 0;
};

class CompactifyAbort : public InvariantError {
 public:
  CompactifyAbort(const std::string &what, CompactifyTrace trace)
      : InvariantError(what), trace_(std::move(trace)) {}
  const CompactifyTrace &trace() const { return trace_; }

 private:
  CompactifyTrace trace_;
};

/**
 * `c` must be an extended circuit over the vertices of `g` with its slice
 * tags intact.
 */
CompactifyResult compactify(
    const Circuit &c, const OpenGraph &g, const Flow &fl, const GFlow &ssf,
    const CompactifyOptions &opts = {});

Circuit replay(
    const Circuit &c, const OpenGraph &g, const Flow &fl,
    const CompactifyTrace &trace);

/** Problems with E gate bookkeeping across a run; empty when sound. */
std::vector<std::string> trace_violations(const CompactifyTrace &trace);

nlohmann::json trace_to_json(
    const CompactifyTrace &t, const OpenGraph *labels = nullptr);
CompactifyTrace trace_from_json(
    const nlohmann::json &j, const OpenGraph *labels = nullptr);

/** Extended circuit over external wire labels, mapped to dense ids. */
struct ExtendedInput {
  OpenGraph graph;
  Flow flow;
  GFlow ssf;
  Circuit circuit;
};

ExtendedInput recover_extended(const Circuit &labelled);

}  // namespace mbqc
