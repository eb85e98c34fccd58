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

#include "mbqc/sim.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "mbqc/errors.hpp"

namespace mbqc {

namespace {

constexpr unsigned kMaxQubits = 22;

}  // namespace

StateVector::StateVector(unsigned n) : n_(n) {
  if (n > kMaxQubits)
    throw InputError(
        "state of " + std::to_string(n) + " qubits is too large to simulate");
  amp_.assign(std::size_t{1} << n, Complex(0.0));
  amp_[0] = 1.0;
}

void StateVector::set_basis(std::uint64_t index) {
  std::fill(amp_.begin(), amp_.end(), Complex(0.0));
  amp_.at(index) = 1.0;
}

void StateVector::apply(unsigned q, const Eigen::Matrix2cd &m) {
  const std::size_t bit = std::size_t{1} << q;
  for (std::size_t i = 0; i < amp_.size(); ++i) {
    if (i & bit) continue;
    const Complex a0 = amp_[i], a1 = amp_[i | bit];
    amp_[i] = m(0, 0) * a0 + m(0, 1) * a1;
    amp_[i | bit] = m(1, 0) * a0 + m(1, 1) * a1;
  }
}

void StateVector::cz(unsigned a, unsigned b) {
  const std::size_t mask = (std::size_t{1} << a) | (std::size_t{1} << b);
  for (std::size_t i = 0; i < amp_.size(); ++i)
    if ((i & mask) == mask) amp_[i] = -amp_[i];
}

void StateVector::cx(unsigned control, unsigned target) {
  const std::size_t c = std::size_t{1} << control;
  const std::size_t t = std::size_t{1} << target;
  for (std::size_t i = 0; i < amp_.size(); ++i)
    if ((i & c) && !(i & t)) std::swap(amp_[i], amp_[i | t]);
}

void StateVector::project(unsigned q, Complex bra0, Complex bra1) {
  const std::size_t bit = std::size_t{1} << q;
  for (std::size_t i = 0; i < amp_.size(); ++i) {
    if (i & bit) continue;
    amp_[i] = bra0 * amp_[i] + bra1 * amp_[i | bit];
    amp_[i | bit] = 0.0;
  }
}

double StateVector::norm() const {
  double s = 0;
  for (const Complex &a : amp_) s += std::norm(a);
  return std::sqrt(s);
}

Eigen::Matrix2cd j_matrix(double theta) {
  const double r = 1.0 / std::sqrt(2.0);
  const Complex e = std::polar(1.0, theta);
  Eigen::Matrix2cd m;
  m << r, r * e, r, -r * e;
  return m;
}

Eigen::Matrix2cd hadamard() { return j_matrix(0.0); }

namespace {

bool parity(const SignalSet &s, const std::vector<int> &outcomes) {
  int p = 0;
  for (Vertex v : s) p ^= outcomes.at(v) & 1;
  return p != 0;
}

Eigen::Matrix2cd pauli_x() {
  Eigen::Matrix2cd m;
  m << 0, 1, 1, 0;
  return m;
}

Eigen::Matrix2cd pauli_z() {
  Eigen::Matrix2cd m;
  m << 1, 0, 0, -1;
  return m;
}

}  // namespace

Matrix pattern_branch_map(const Pattern &p, const std::vector<int> &outcomes) {
  const OpenGraph &g = p.space;
  const unsigned n = g.n_vertices();
  if (outcomes.size() != n) throw InputError("one outcome per vertex expected");
  const auto &in = g.inputs();
  const auto &out = g.outputs();
  Matrix a = Matrix::Zero(Eigen::Index{1} << out.size(),
                          Eigen::Index{1} << in.size());
  StateVector st(n);
  const double r = 1.0 / std::sqrt(2.0);
  for (std::uint64_t b = 0; b < (std::uint64_t{1} << in.size()); ++b) {
    std::uint64_t idx = 0;
    for (std::size_t k = 0; k < in.size(); ++k)
      if (b >> k & 1) idx |= std::uint64_t{1} << in[k];
    st.set_basis(idx);
    for (const Command &c : p.commands) {
      switch (c.kind) {
        case CommandKind::N:
          st.apply(c.qubit, hadamard());
          break;
        case CommandKind::E:
          st.cz(c.qubit, c.other);
          break;
        case CommandKind::M: {
          double alpha = c.angle.radians();
          if (parity(c.s_domain, outcomes)) alpha = -alpha;
          if (parity(c.t_domain, outcomes)) alpha += std::numbers::pi;
          const Complex e = std::polar(1.0, -alpha);
          const double sign = outcomes[c.qubit] & 1 ? -1.0 : 1.0;
          st.project(c.qubit, r, sign * r * e);
          break;
        }
        case CommandKind::X:
          if (parity(c.s_domain, outcomes)) st.apply(c.qubit, pauli_x());
          break;
        case CommandKind::Z:
          if (parity(c.s_domain, outcomes)) st.apply(c.qubit, pauli_z());
          break;
        case CommandKind::S:
          throw InputError("cannot simulate shift commands");
      }
    }
    for (std::uint64_t o = 0; o < (std::uint64_t{1} << out.size()); ++o) {
      std::uint64_t full = 0;
      for (std::size_t k = 0; k < out.size(); ++k)
        if (o >> k & 1) full |= std::uint64_t{1} << out[k];
      a(static_cast<Eigen::Index>(o), static_cast<Eigen::Index>(b)) =
          st.amplitudes()[full];
    }
  }
  return a;
}

Matrix pattern_map(const Pattern &p) {
  const unsigned n = p.space.n_vertices();
  const unsigned m = n - static_cast<unsigned>(p.space.outputs().size());
  return pattern_branch_map(p, std::vector<int>(n, 0)) *
         std::pow(2.0, 0.5 * m);
}

bool is_strongly_deterministic(
    const Pattern &p, double tol, unsigned max_exhaustive, unsigned samples) {
  const OpenGraph &g = p.space;
  const unsigned n = g.n_vertices();
  const std::vector<Vertex> measured = members(g.non_outputs());
  const unsigned m = static_cast<unsigned>(measured.size());
  const double scale = std::pow(2.0, 0.5 * m);
  const Matrix a0 = pattern_branch_map(p, std::vector<int>(n, 0)) * scale;
  auto branch = [&](std::uint64_t bits) {
    std::vector<int> oc(n, 0);
    for (unsigned k = 0; k < m; ++k) oc[measured[k]] = (bits >> k) & 1;
    return equivalent_up_to_phase(
        a0, pattern_branch_map(p, oc) * scale, tol);
  };
  if (m <= max_exhaustive) {
    for (std::uint64_t bits = 1; bits < (std::uint64_t{1} << m); ++bits)
      if (!branch(bits)) return false;
    return true;
  }
  std::mt19937_64 rng(0x5eed);
  for (unsigned k = 0; k < samples; ++k)
    if (!branch(rng() & ((std::uint64_t{1} << m) - 1))) return false;
  return true;
}

StateVector run_circuit(const Circuit &c, std::uint64_t input_basis) {
  StateVector st(static_cast<unsigned>(c.wires.size()));
  std::uint64_t idx = 0;
  for (std::size_t k = 0; k < c.inputs.size(); ++k)
    if (input_basis >> k & 1) idx |= std::uint64_t{1} << c.position(c.inputs[k]);
  st.set_basis(idx);
  for (Wire w : c.wires)
    if (c.initial.at(w) == WireInit::Plus)
      st.apply(static_cast<unsigned>(c.position(w)), hadamard());
  for (const Gate &g : c.gates) {
    const unsigned a = static_cast<unsigned>(c.position(g.a));
    switch (g.kind) {
      case GateKind::J:
        st.apply(a, j_matrix(g.angle.radians()));
        break;
      case GateKind::Z:
        st.apply(a, pauli_z());
        break;
      case GateKind::E:
      case GateKind::CZ:
        st.cz(a, static_cast<unsigned>(c.position(g.b)));
        break;
      case GateKind::CX:
        st.cx(a, static_cast<unsigned>(c.position(g.b)));
        break;
    }
  }
  return st;
}

Matrix circuit_map(const Circuit &c, double tol) {
  c.validate();
  std::vector<unsigned> outpos, rest;
  for (Wire w : c.outputs) outpos.push_back(static_cast<unsigned>(c.position(w)));
  for (Wire w : c.wires)
    if (std::find(c.outputs.begin(), c.outputs.end(), w) == c.outputs.end())
      rest.push_back(static_cast<unsigned>(c.position(w)));
  const std::size_t no = std::size_t{1} << outpos.size();
  const std::size_t nr = std::size_t{1} << rest.size();
  const std::size_t ni = std::size_t{1} << c.inputs.size();
  auto index = [&](std::size_t o, std::size_t r) {
    std::size_t i = 0;
    for (std::size_t k = 0; k < outpos.size(); ++k)
      if (o >> k & 1) i |= std::size_t{1} << outpos[k];
    for (std::size_t k = 0; k < rest.size(); ++k)
      if (r >> k & 1) i |= std::size_t{1} << rest[k];
    return i;
  };
  Matrix result = Matrix::Zero(static_cast<Eigen::Index>(no),
                               static_cast<Eigen::Index>(ni));
  std::vector<Complex> chi;
  for (std::size_t b = 0; b < ni; ++b) {
    const StateVector st = run_circuit(c, b);
    const auto &amp = st.amplitudes();
    if (chi.empty()) {
      // Ancilla state read off the heaviest output row of the first column.
      std::size_t best = 0;
      double best_w = -1;
      for (std::size_t o = 0; o < no; ++o) {
        double w = 0;
        for (std::size_t r = 0; r < nr; ++r) w += std::norm(amp[index(o, r)]);
        if (w > best_w) {
          best_w = w;
          best = o;
        }
      }
      chi.resize(nr);
      double nrm = 0;
      for (std::size_t r = 0; r < nr; ++r) {
        chi[r] = amp[index(best, r)];
        nrm += std::norm(chi[r]);
      }
      nrm = std::sqrt(nrm);
      if (nrm < kNormTolerance) throw InvariantError("circuit state vanished");
      for (Complex &x : chi) x /= nrm;
    }
    for (std::size_t o = 0; o < no; ++o) {
      Complex v = 0;
      for (std::size_t r = 0; r < nr; ++r)
        v += amp[index(o, r)] * std::conj(chi[r]);
      result(static_cast<Eigen::Index>(o), static_cast<Eigen::Index>(b)) = v;
      for (std::size_t r = 0; r < nr; ++r)
        if (std::abs(amp[index(o, r)] - v * chi[r]) > tol)
          throw InvariantError(
              "measured wires do not factor out of the circuit state");
    }
  }
  return result;
}

Matrix circuit_unitary(const Circuit &c) {
  if (c.wires.size() > 10) throw InputError("too many wires for a unitary");
  if (!c.measured.empty() || c.inputs.size() != c.wires.size())
    throw InputError("circuit has ancilla or measured wires");
  return circuit_map(c);
}

bool equivalent_up_to_phase(const Matrix &a, const Matrix &b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  Eigen::Index r = 0, col = 0;
  a.cwiseAbs().maxCoeff(&r, &col);
  const Complex pa = a(r, col), pb = b(r, col);
  if (std::abs(pa) < kNormTolerance) return b.cwiseAbs().maxCoeff() <= tol;
  if (std::abs(pb) < kNormTolerance) return false;
  const Complex phase = (pb / pa) / std::abs(pb / pa);
  return (a * phase - b).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace mbqc
