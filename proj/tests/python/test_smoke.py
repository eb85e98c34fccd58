# Copyright 2019-2024 Cambridge Quantum Computing
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


import json
import pathlib

import pytest

import mbqc

DATA = pathlib.Path(__file__).resolve().parents[1] / "data"


def load(name):
    return json.loads((DATA / name).read_text())


def test_optimize_three_wires():
    circuit = load("example1_circuit.json")
    out, report, checks = mbqc.optimize(circuit, verify=True)
    assert report["wires_out"] == 3
    assert report["extended_wires"] == 8
    assert report["ssf_depth"] == 2
    assert report["compact"]
    assert all(c["ok"] for c in checks)
    assert mbqc.equivalent(circuit, out)


@pytest.mark.parametrize("rules", ["halfpi", "zero", "both"])
def test_pauli_rules(rules):
    circuit = load("example2_circuit.json")
    out, report, checks = mbqc.optimize(circuit, pauli=rules, verify=True)
    assert all(c["ok"] for c in checks)
    assert report["pattern_depth"] <= report["ssf_depth"]
    assert mbqc.equivalent(circuit, out)


def test_gflow_kinds():
    assert mbqc.gflow(load("line_graph.json"))["ssf_depth"] == 6
    only = mbqc.gflow(load("gflow_only_graph.json"))
    assert not only["has_flow"] and only["has_gflow"]
    assert only["gflow_depth"] == 2
    none = mbqc.gflow(load("no_gflow_graph.json"))
    assert not none["has_flow"] and not none["has_gflow"]


def test_bad_input_raises():
    with pytest.raises(mbqc.InputError):
        mbqc.optimize({"wires": [0], "gates": [{"kind": "CX", "control": 0, "target": 0}]})
    with pytest.raises(ValueError):
        mbqc.optimize(load("example1_circuit.json"), pauli="sometimes")
