// Copyright 2026 The aqsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Exact dense statevector simulation for small qubit registers: state
// construction, single-qubit gates, Bell and X measurements with collapse,
// global-phase-insensitive equality, and the swap test.
//
// Convention: qubit 0 is the leftmost tensor factor, i.e. for basis index
// i of an n-qubit state the bit of qubit q is (i >> (n-1-q)) & 1, so
// |01> has amplitude index 1.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "aqs/random.hpp"

namespace aqs {

using Complex = std::complex<double>;

inline constexpr double kNormTolerance = 1e-9;
inline constexpr double kPhaseTolerance = 1e-9;
inline constexpr double kUnitaryTolerance = 1e-12;

/// Single-qubit unitary, row-major 2x2.
struct Gate {
  std::array<Complex, 4> m{};

  bool is_unitary(double tol = kUnitaryTolerance) const {
    // G† G == I entry-wise.
    const Complex a = std::conj(m[0]) * m[0] + std::conj(m[2]) * m[2];
    const Complex b = std::conj(m[0]) * m[1] + std::conj(m[2]) * m[3];
    const Complex c = std::conj(m[1]) * m[0] + std::conj(m[3]) * m[2];
    const Complex d = std::conj(m[1]) * m[1] + std::conj(m[3]) * m[3];
    return std::abs(a - 1.0) <= tol && std::abs(b) <= tol &&
           std::abs(c) <= tol && std::abs(d - 1.0) <= tol;
  }
};

inline Gate adjoint(const Gate& g) {
  return Gate{{std::conj(g.m[0]), std::conj(g.m[2]), std::conj(g.m[1]),
               std::conj(g.m[3])}};
}

namespace gates {

inline Gate identity() { return Gate{{1, 0, 0, 1}}; }
inline Gate pauli_x() { return Gate{{0, 1, 1, 0}}; }
inline Gate pauli_y() {
  return Gate{{0, Complex(0, -1), Complex(0, 1), 0}};
}
inline Gate pauli_z() { return Gate{{1, 0, 0, -1}}; }
inline Gate hadamard() {
  const double s = 1.0 / std::sqrt(2.0);
  return Gate{{s, s, s, -s}};
}
inline Gate phase_s() { return Gate{{1, 0, 0, Complex(0, 1)}}; }
inline Gate phase_t() {
  const double s = 1.0 / std::sqrt(2.0);
  return Gate{{1, 0, 0, Complex(s, s)}};
}

}  // namespace gates

/// Amplitude pair (a, b) for a single qubit a|0> + b|1>.
struct QubitState {
  Complex a{1.0, 0.0};
  Complex b{0.0, 0.0};

  double norm_sq() const { return std::norm(a) + std::norm(b); }
};

class StateVector {
 public:
  StateVector() : num_qubits_(0), amps_{Complex(1.0, 0.0)} {}

  /// |0...0> on `num_qubits` qubits.
  explicit StateVector(std::size_t num_qubits)
      : num_qubits_(num_qubits), amps_(std::size_t{1} << num_qubits) {
    amps_[0] = Complex(1.0, 0.0);
  }

  /// Takes ownership of an amplitude vector; must have length 2^num_qubits
  /// and unit norm within kNormTolerance.
  StateVector(std::size_t num_qubits, std::vector<Complex> amplitudes)
      : num_qubits_(num_qubits), amps_(std::move(amplitudes)) {
    if (amps_.size() != (std::size_t{1} << num_qubits)) {
      throw std::invalid_argument(
          "amplitude vector length does not match qubit count");
    }
    if (std::abs(norm() - 1.0) > kNormTolerance) {
      throw std::invalid_argument("state vector is not normalized");
    }
  }

  std::size_t num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return amps_.size(); }
  const std::vector<Complex>& amplitudes() const { return amps_; }

  Complex amplitude(std::size_t index) const {
    if (index >= amps_.size()) {
      throw std::out_of_range("basis index out of range");
    }
    return amps_[index];
  }

  double norm() const {
    double s = 0.0;
    for (const Complex& a : amps_) s += std::norm(a);
    return std::sqrt(s);
  }

  /// Bit of `qubit` within basis index `index`.
  std::size_t bit(std::size_t index, std::size_t qubit) const {
    return (index >> (num_qubits_ - 1 - qubit)) & std::size_t{1};
  }

 private:
  std::size_t num_qubits_;
  std::vector<Complex> amps_;
};

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

/// Tensor product of per-qubit states; qubit i of the result is pair i.
inline StateVector make_product_state(std::span<const QubitState> qubits) {
  for (const QubitState& q : qubits) {
    if (std::abs(q.norm_sq() - 1.0) > kNormTolerance) {
      throw std::invalid_argument("qubit state (a, b) is not normalized");
    }
  }
  std::vector<Complex> amps{Complex(1.0, 0.0)};
  for (const QubitState& q : qubits) {
    std::vector<Complex> next(amps.size() * 2);
    for (std::size_t i = 0; i < amps.size(); ++i) {
      next[2 * i] = amps[i] * q.a;
      next[2 * i + 1] = amps[i] * q.b;
    }
    amps = std::move(next);
  }
  return StateVector(qubits.size(), std::move(amps));
}

inline StateVector make_product_state(std::initializer_list<QubitState> qs) {
  return make_product_state(std::span<const QubitState>(qs.begin(), qs.size()));
}

/// Three-qubit (|000> + |111>) / sqrt(2).
inline StateVector make_ghz() {
  std::vector<Complex> amps(8);
  const double s = 1.0 / std::sqrt(2.0);
  amps[0] = s;
  amps[7] = s;
  return StateVector(3, std::move(amps));
}

/// |a> ⊗ |b>; qubits of `a` come first.
inline StateVector tensor(const StateVector& a, const StateVector& b) {
  std::vector<Complex> amps(a.dim() * b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t j = 0; j < b.dim(); ++j) {
      amps[i * b.dim() + j] = a.amplitudes()[i] * b.amplitudes()[j];
    }
  }
  return StateVector(a.num_qubits() + b.num_qubits(), std::move(amps));
}

// ---------------------------------------------------------------------------
// Gates
// ---------------------------------------------------------------------------

inline StateVector apply_gate(const StateVector& state, const Gate& gate,
                              std::size_t target) {
  const std::size_t n = state.num_qubits();
  if (target >= n) {
    throw std::out_of_range("gate target qubit out of range");
  }
  std::vector<Complex> amps = state.amplitudes();
  const std::size_t step = std::size_t{1} << (n - 1 - target);
  const std::size_t block = step << 1;
  for (std::size_t base = 0; base < amps.size(); base += block) {
    for (std::size_t off = 0; off < step; ++off) {
      const std::size_t i0 = base + off;
      const std::size_t i1 = i0 + step;
      const Complex a = amps[i0];
      const Complex b = amps[i1];
      amps[i0] = gate.m[0] * a + gate.m[1] * b;
      amps[i1] = gate.m[2] * a + gate.m[3] * b;
    }
  }
  return StateVector(n, std::move(amps));
}

/// Reorders qubits: input qubit q becomes output qubit perm[q].
inline StateVector permute_qubits(const StateVector& state,
                                  std::span<const std::size_t> perm) {
  const std::size_t n = state.num_qubits();
  if (perm.size() != n) {
    throw std::invalid_argument("permutation length does not match state");
  }
  std::vector<bool> seen(n, false);
  for (std::size_t p : perm) {
    if (p >= n || seen[p]) {
      throw std::invalid_argument("not a valid qubit permutation");
    }
    seen[p] = true;
  }
  std::vector<Complex> amps(state.dim());
  for (std::size_t i = 0; i < state.dim(); ++i) {
    std::size_t j = 0;
    for (std::size_t q = 0; q < n; ++q) {
      j |= state.bit(i, q) << (n - 1 - perm[q]);
    }
    amps[j] = state.amplitudes()[i];
  }
  return StateVector(n, std::move(amps));
}

// ---------------------------------------------------------------------------
// Overlaps
// ---------------------------------------------------------------------------

inline Complex inner_product(const StateVector& a, const StateVector& b) {
  if (a.num_qubits() != b.num_qubits()) {
    throw std::invalid_argument("inner product of mismatched registers");
  }
  Complex r(0.0, 0.0);
  for (std::size_t i = 0; i < a.dim(); ++i) {
    r += std::conj(a.amplitudes()[i]) * b.amplitudes()[i];
  }
  return r;
}

/// |<a|b>|^2.
inline double fidelity(const StateVector& a, const StateVector& b) {
  return std::norm(inner_product(a, b));
}

/// True iff |<a|b>| >= 1 - tol.
inline bool equal_up_to_global_phase(const StateVector& a,
                                     const StateVector& b,
                                     double tol = kPhaseTolerance) {
  return std::abs(inner_product(a, b)) >= 1.0 - tol;
}

// ---------------------------------------------------------------------------
// Measurement
// ---------------------------------------------------------------------------

/// One of the four Bell states. bit0 (psi) distinguishes Phi vs Psi,
/// bit1 (minus) distinguishes + vs -. This encoding is fixed: protocol
/// records and record-tampering attacks address the bits by role.
struct BellOutcome {
  bool psi = false;
  bool minus = false;

  std::size_t index() const {
    return (static_cast<std::size_t>(psi) << 1) |
           static_cast<std::size_t>(minus);
  }
  std::string label() const {
    std::string s = psi ? "Psi" : "Phi";
    s += minus ? '-' : '+';
    return s;
  }
  friend bool operator==(const BellOutcome&, const BellOutcome&) = default;
};

inline constexpr std::array<BellOutcome, 4> kBellOutcomes = {
    BellOutcome{false, false}, BellOutcome{false, true},
    BellOutcome{true, false}, BellOutcome{true, true}};

namespace detail {

// <bell(outcome)| as amplitudes over the two measured bits (b1 b2).
inline std::array<Complex, 4> bell_bra(const BellOutcome& o) {
  const double s = 1.0 / std::sqrt(2.0);
  const double sign = o.minus ? -s : s;
  if (!o.psi) return {Complex(s), 0, 0, Complex(sign)};   // (|00> ± |11>)/√2
  return {0, Complex(s), Complex(sign), 0};               // (|01> ± |10>)/√2
}

// Projects two qubits onto the given bra; returns the unnormalized residual
// over the remaining qubits (original relative order) plus its norm^2.
inline std::pair<double, std::vector<Complex>> project_pair(
    const StateVector& state, std::size_t q1, std::size_t q2,
    const std::array<Complex, 4>& bra) {
  const std::size_t n = state.num_qubits();
  std::vector<Complex> reduced(std::size_t{1} << (n - 2), Complex(0.0));
  for (std::size_t i = 0; i < state.dim(); ++i) {
    const std::size_t b = (state.bit(i, q1) << 1) | state.bit(i, q2);
    std::size_t rest = 0;
    for (std::size_t q = 0; q < n; ++q) {
      if (q == q1 || q == q2) continue;
      rest = (rest << 1) | state.bit(i, q);
    }
    reduced[rest] += std::conj(bra[b]) * state.amplitudes()[i];
  }
  double prob = 0.0;
  for (const Complex& c : reduced) prob += std::norm(c);
  return {prob, std::move(reduced)};
}

inline StateVector normalize_collapsed(std::size_t num_qubits,
                                       std::vector<Complex> amps,
                                       double prob) {
  const double scale = 1.0 / std::sqrt(prob);
  for (Complex& c : amps) c *= scale;
  return StateVector(num_qubits, std::move(amps));
}

}  // namespace detail

struct BellProjection {
  double probability = 0.0;
  StateVector state;  // residual over the remaining qubits; valid if probability > 0
};

/// Deterministic projection of qubits (q1, q2) onto one Bell outcome.
/// The measured qubits are removed from the register.
inline BellProjection project_bell(const StateVector& state, std::size_t q1,
                                   std::size_t q2, const BellOutcome& outcome) {
  const std::size_t n = state.num_qubits();
  if (q1 >= n || q2 >= n) throw std::out_of_range("qubit index out of range");
  if (q1 == q2) throw std::invalid_argument("Bell measurement needs two distinct qubits");
  auto [prob, reduced] =
      detail::project_pair(state, q1, q2, detail::bell_bra(outcome));
  if (prob <= 0.0) return {0.0, StateVector(n - 2)};
  return {prob, detail::normalize_collapsed(n - 2, std::move(reduced), prob)};
}

/// Samples a Bell measurement of (q1, q2) with Born-rule probabilities and
/// collapses; zero-probability outcomes are never drawn.
inline std::pair<BellOutcome, StateVector> measure_bell(const StateVector& state,
                                                        std::size_t q1,
                                                        std::size_t q2,
                                                        Rng& rng) {
  const std::size_t n = state.num_qubits();
  if (q1 >= n || q2 >= n) throw std::out_of_range("qubit index out of range");
  if (q1 == q2) throw std::invalid_argument("Bell measurement needs two distinct qubits");
  std::array<std::pair<double, std::vector<Complex>>, 4> branches;
  double total = 0.0;
  for (std::size_t k = 0; k < 4; ++k) {
    branches[k] =
        detail::project_pair(state, q1, q2, detail::bell_bra(kBellOutcomes[k]));
    total += branches[k].first;
  }
  if (total <= 0.0) throw std::logic_error("measurement on a zero-norm state");
  const double u = std::uniform_real_distribution<double>(0.0, total)(rng);
  double cum = 0.0;
  std::size_t pick = 4;
  for (std::size_t k = 0; k < 4; ++k) {
    if (branches[k].first <= 0.0) continue;
    cum += branches[k].first;
    pick = k;
    if (u < cum) break;
  }
  auto& [prob, reduced] = branches[pick];
  return {kBellOutcomes[pick],
          detail::normalize_collapsed(n - 2, std::move(reduced), prob)};
}

struct XProjection {
  double probability = 0.0;
  StateVector state;
};

/// Projects qubit q onto |+> (bit 0) or |-> (bit 1); the qubit is removed.
inline XProjection project_x(const StateVector& state, std::size_t q, int bit) {
  const std::size_t n = state.num_qubits();
  if (q >= n) throw std::out_of_range("qubit index out of range");
  const double s = 1.0 / std::sqrt(2.0);
  const Complex c0(s), c1(bit ? -s : s);
  std::vector<Complex> reduced(std::size_t{1} << (n - 1), Complex(0.0));
  for (std::size_t i = 0; i < state.dim(); ++i) {
    std::size_t rest = 0;
    for (std::size_t qq = 0; qq < n; ++qq) {
      if (qq == q) continue;
      rest = (rest << 1) | state.bit(i, qq);
    }
    const Complex coeff = state.bit(i, q) ? c1 : c0;
    reduced[rest] += std::conj(coeff) * state.amplitudes()[i];
  }
  double prob = 0.0;
  for (const Complex& c : reduced) prob += std::norm(c);
  if (prob <= 0.0) return {0.0, StateVector(n - 1)};
  return {prob, detail::normalize_collapsed(n - 1, std::move(reduced), prob)};
}

/// X-basis measurement of qubit q: samples + (0) / - (1), collapses, and
/// removes the measured qubit.
inline std::pair<int, StateVector> measure_x(const StateVector& state,
                                             std::size_t q, Rng& rng) {
  XProjection plus = project_x(state, q, 0);
  XProjection minus = project_x(state, q, 1);
  const double total = plus.probability + minus.probability;
  if (total <= 0.0) throw std::logic_error("measurement on a zero-norm state");
  const double u = std::uniform_real_distribution<double>(0.0, total)(rng);
  if (plus.probability > 0.0 && u < plus.probability) {
    return {0, std::move(plus.state)};
  }
  if (minus.probability > 0.0) return {1, std::move(minus.state)};
  return {0, std::move(plus.state)};
}

// ---------------------------------------------------------------------------
// Swap test
// ---------------------------------------------------------------------------

/// Single-shot swap test on a joint state over two equal-size registers
/// ([0, m) vs [m, 2m)): ancilla + controlled swap + X-basis ancilla
/// measurement. Passes with probability (1 + <SWAP>)/2.
inline bool swap_test_joint(const StateVector& joint, Rng& rng) {
  const std::size_t n = joint.num_qubits();
  if (n == 0 || n % 2 != 0) {
    throw std::invalid_argument("swap test needs two equal registers");
  }
  const std::size_t m = n / 2;
  StateVector full = tensor(StateVector(1), joint);  // ancilla is qubit 0
  full = apply_gate(full, gates::hadamard(), 0);
  std::vector<Complex> amps = full.amplitudes();
  const std::size_t nq = full.num_qubits();
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t qa = 1 + k;
    const std::size_t qb = 1 + m + k;
    const std::size_t mask = (std::size_t{1} << (nq - 1 - qa)) |
                             (std::size_t{1} << (nq - 1 - qb));
    for (std::size_t i = 0; i < amps.size(); ++i) {
      if (!full.bit(i, 0)) continue;
      if (full.bit(i, qa) == 1 && full.bit(i, qb) == 0) {
        std::swap(amps[i], amps[i ^ mask]);
      }
    }
  }
  full = StateVector(nq, std::move(amps));
  auto [bit, rest] = measure_x(full, 0, rng);
  return bit == 0;
}

/// Single-shot swap test between two independent states.
inline bool swap_test(const StateVector& a, const StateVector& b, Rng& rng) {
  if (a.num_qubits() != b.num_qubits()) {
    throw std::invalid_argument("swap test of mismatched registers");
  }
  return swap_test_joint(tensor(a, b), rng);
}

// ---------------------------------------------------------------------------
// Random states
// ---------------------------------------------------------------------------

/// Haar-uniform pure qubit state.
inline QubitState haar_random_qubit(Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  while (true) {
    const Complex a(g(rng), g(rng));
    const Complex b(g(rng), g(rng));
    const double n2 = std::norm(a) + std::norm(b);
    if (n2 < 1e-12) continue;
    const double s = 1.0 / std::sqrt(n2);
    return QubitState{a * s, b * s};
  }
}

}  // namespace aqs
