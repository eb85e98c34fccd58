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


#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "fixtures.hpp"
#include "mbqc/pattern.hpp"
#include "mbqc/sim.hpp"

using namespace mbqc;

TEST_CASE("phase equivalence", "[sim]") {
  const Matrix a = hadamard();
  CHECK(equivalent_up_to_phase(a, a * std::polar(1.0, 0.7)));
  CHECK_FALSE(equivalent_up_to_phase(a, Matrix(a * 2.0)));
  Matrix b = Matrix::Identity(2, 2);
  CHECK_FALSE(equivalent_up_to_phase(a, b));
  CHECK_FALSE(equivalent_up_to_phase(a, Matrix::Identity(4, 4)));
}

TEST_CASE("J matrix decomposition", "[sim]") {
  const Eigen::Matrix2cd j0 = j_matrix(0.0);
  CHECK((j0 - hadamard()).norm() < 1e-12);
  const double t = 0.4;
  Eigen::Matrix2cd ph = Eigen::Matrix2cd::Identity();
  ph(1, 1) = std::polar(1.0, t);
  CHECK((j_matrix(t) - hadamard() * ph).norm() < 1e-12);
}

TEST_CASE("state vector gates", "[sim]") {
  StateVector s(2);
  s.set_basis(0);
  s.apply(0, hadamard());
  s.cx(0, 1);
  const auto &amp = s.amplitudes();
  CHECK(std::abs(amp[0] - Complex(M_SQRT1_2, 0)) < 1e-12);
  CHECK(std::abs(amp[3] - Complex(M_SQRT1_2, 0)) < 1e-12);
  CHECK(std::abs(s.norm() - 1.0) < 1e-12);
}

TEST_CASE("single J pattern implements J", "[sim]") {
  Circuit c = Circuit::on_wires(1);
  c.add(Gate::J(0, Angle(1, 3)));
  const Pattern p = pattern_from_circuit(c);
  CHECK(equivalent_up_to_phase(pattern_map(p), j_matrix(M_PI / 3)));
  CHECK(equivalent_up_to_phase(circuit_unitary(c), j_matrix(M_PI / 3)));
  CHECK(is_strongly_deterministic(p));
}

TEST_CASE("missing correction breaks determinism", "[sim]") {
  Circuit c = Circuit::on_wires(1);
  c.add(Gate::J(0, Angle(1, 3)));
  Pattern p = pattern_from_circuit(c);
  std::erase_if(p.commands,
                [](const Command &k) { return k.kind == CommandKind::X; });
  CHECK_FALSE(is_strongly_deterministic(p));
  // The all-zero branch alone does not notice.
  CHECK(equivalent_up_to_phase(pattern_map(p), j_matrix(M_PI / 3)));
}

TEST_CASE("circuit map rejects entangled measured wires", "[sim]") {
  Circuit c;
  c.wires = {0, 1};
  c.initial = {{0, WireInit::Input}, {1, WireInit::Plus}};
  c.inputs = {0};
  c.outputs = {1};
  c.measured = {0};
  c.add(Gate::CZ(0, 1));
  CHECK_THROWS(circuit_map(c));
}
