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

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "mbqc/circuit.hpp"
#include "mbqc/pattern.hpp"

namespace mbqc {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

constexpr double kNormTolerance = 1e-12;
constexpr double kEquivTolerance = 1e-9;

/**
 * Dense state over n qubits. Qubit q is bit q of the basis index
 * (little-endian).
 */
class StateVector {
 public:
  explicit StateVector(unsigned n);

  unsigned n_qubits() const { return n_; }
  const std::vector<Complex> &amplitudes() const { return amp_; }
  std::vector<Complex> &amplitudes() { return amp_; }

  void set_basis(std::uint64_t index);
  void apply(unsigned q, const Eigen::Matrix2cd &m);
  void cz(unsigned a, unsigned b);
  void cx(unsigned control, unsigned target);
  /** Contract qubit q with <bra| and leave it in |0>. */
  void project(unsigned q, Complex bra0, Complex bra1);
  double norm() const;

 private:
  unsigned n_;
  std::vector<Complex> amp_;
};

Eigen::Matrix2cd j_matrix(double theta);
Eigen::Matrix2cd hadamard();

/**
 * Unnormalised map of one measurement branch, columns over the input basis
 * in I order and rows over the output basis in O order. `outcomes` is
 * indexed by vertex; entries of outputs are ignored.
 */
Matrix pattern_branch_map(const Pattern &p, const std::vector<int> &outcomes);

/** Branch with all outcomes 0, rescaled to undo the branch probability. */
Matrix pattern_map(const Pattern &p);

/**
 * Every branch map is a phase multiple of the all-zero branch. Branches are
 * enumerated exhaustively up to `max_exhaustive` measured qubits and
 * sampled otherwise.
 */
bool is_strongly_deterministic(
    const Pattern &p, double tol = kEquivTolerance,
    unsigned max_exhaustive = 10, unsigned samples = 64);

/** Final state of a circuit run on one input basis state. */
StateVector run_circuit(const Circuit &c, std::uint64_t input_basis);

/**
 * Isometry from inputs to outputs, after checking that the measured wires
 * end in a product state independent of the input.
 */
Matrix circuit_map(const Circuit &c, double tol = kEquivTolerance);

/** Unitary of a circuit with no ancilla or measured wires, at most 10 wires. */
Matrix circuit_unitary(const Circuit &c);

bool equivalent_up_to_phase(
    const Matrix &a, const Matrix &b, double tol = kEquivTolerance);

}  // namespace mbqc
