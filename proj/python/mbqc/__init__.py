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


"""Circuit optimisation through measurement patterns."""

import json

from ._mbqc import InputError, InvariantError, equivalent_json, gflow_json, optimize_json

__all__ = ["InputError", "InvariantError", "optimize", "gflow", "equivalent"]


def optimize(circuit, pauli=None, verify=False):
    """Optimise a circuit given as a dict. Returns (circuit, report[, checks])."""
    r = optimize_json(json.dumps(circuit), pauli or "", verify)
    out = (json.loads(r["circuit"]), json.loads(r["report"]))
    if verify:
        return out + ([{"stage": s, "ok": ok, "detail": d} for s, ok, d in r["checks"]],)
    return out


def gflow(graph):
    """Flow, SSF and maximally delayed gflow of an open graph dict."""
    r = dict(gflow_json(json.dumps(graph)))
    for key in ("flow", "ssf", "gflow"):
        if key in r:
            r[key] = json.loads(r[key])
    return r


def equivalent(a, b, tol=1e-9):
    return equivalent_json(json.dumps(a), json.dumps(b), tol)
