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


// Python bindings over JSON strings.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mbqc/errors.hpp"
#include "mbqc/flow.hpp"
#include "mbqc/pattern.hpp"
#include "mbqc/pipeline.hpp"
#include "mbqc/sim.hpp"

namespace py = pybind11;
using namespace mbqc;

namespace {

nlohmann::json parse(const std::string &s) {
  try {
    return nlohmann::json::parse(s);
  } catch (const nlohmann::json::exception &e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

unsigned rules_of(const std::string &pauli) {
  if (pauli.empty() || pauli == "none") return 0;
  if (pauli == "halfpi") return kHalfPiRule;
  if (pauli == "zero") return kZeroRule;
  if (pauli == "both") return kHalfPiRule | kZeroRule;
  throw InputError("unknown Pauli rule set: " + pauli);
}

py::dict optimize_json(const std::string &circuit, const std::string &pauli,
                       bool verify) {
  PipelineOptions o;
  o.pauli_rules = rules_of(pauli);
  const PipelineResult r = optimize(circuit_from_json(parse(circuit)), o);
  py::dict out;
  out["report"] = report_to_json(r.report).dump();
  out["circuit"] = circuit_to_json(r.output).dump();
  out["text"] = report_to_text(r.report);
  if (verify) {
    py::list checks;
    for (const StageCheck &s : verify_pipeline(r))
      checks.append(py::make_tuple(s.stage, s.ok, s.detail));
    out["checks"] = checks;
  }
  return out;
}

py::dict gflow_json(const std::string &graph) {
  const OpenGraph g = graph_from_json(parse(graph));
  py::dict out;
  const auto fl = find_flow(g);
  out["has_flow"] = fl.has_value();
  if (fl) {
    const GFlow ssf = ssf_from_flow(*fl, g);
    out["flow"] = flow_to_json(g, *fl).dump();
    out["ssf"] = gflow_to_json(g, ssf).dump();
    out["flow_depth"] = fl->depth();
    out["ssf_depth"] = ssf.depth();
  }
  const auto mdg = max_delayed_gflow(g);
  out["has_gflow"] = mdg.has_value();
  if (mdg) {
    out["gflow"] = gflow_to_json(g, *mdg).dump();
    out["gflow_depth"] = mdg->depth();
  }
  return out;
}

bool equivalent_json(const std::string &a, const std::string &b, double tol) {
  return equivalent_up_to_phase(circuit_map(circuit_from_json(parse(a)), tol),
                                circuit_map(circuit_from_json(parse(b)), tol),
                                tol);
}

}  // namespace

PYBIND11_MODULE(_mbqc, m) {
  m.doc() = "Circuit optimisation through measurement patterns";
  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<InvariantError>(m, "InvariantError", PyExc_RuntimeError);
  m.def("optimize_json", &optimize_json, py::arg("circuit"),
        py::arg("pauli") = "", py::arg("verify") = false);
  m.def("gflow_json", &gflow_json, py::arg("graph"));
  m.def("equivalent_json", &equivalent_json, py::arg("a"), py::arg("b"),
        py::arg("tol") = kEquivTolerance);
}
