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

// Symbolic n-qubit Pauli strings with an exact global phase i^k, k mod 4.
// The phase is integer arithmetic, never floating point, so sign bookkeeping
// in products and conjugations is exact.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "aqs/statevector.hpp"

namespace aqs {

enum class PauliLetter : std::uint8_t { I, X, Y, Z };

inline char to_char(PauliLetter p) {
  switch (p) {
    case PauliLetter::I: return 'I';
    case PauliLetter::X: return 'X';
    case PauliLetter::Y: return 'Y';
    case PauliLetter::Z: return 'Z';
  }
  return '?';
}

inline PauliLetter letter_from_char(char c) {
  switch (c) {
    case 'I': return PauliLetter::I;
    case 'X': return PauliLetter::X;
    case 'Y': return PauliLetter::Y;
    case 'Z': return PauliLetter::Z;
    default: throw std::invalid_argument("unknown Pauli letter");
  }
}

namespace detail {

// Single-letter product a*b = i^k * letter. Cyclic pairs (XY, YZ, ZX)
// contribute i, anticyclic pairs -i.
inline std::pair<PauliLetter, std::uint8_t> letter_product(PauliLetter a,
                                                           PauliLetter b) {
  using P = PauliLetter;
  if (a == P::I) return {b, 0};
  if (b == P::I) return {a, 0};
  if (a == b) return {P::I, 0};
  if (a == P::X && b == P::Y) return {P::Z, 1};
  if (a == P::Y && b == P::Z) return {P::X, 1};
  if (a == P::Z && b == P::X) return {P::Y, 1};
  if (a == P::Y && b == P::X) return {P::Z, 3};
  if (a == P::Z && b == P::Y) return {P::X, 3};
  /* a == P::X && b == P::Z */
  return {P::Y, 3};
}

}  // namespace detail

class PauliString {
 public:
  PauliString() = default;

  /// Identity string of length n.
  explicit PauliString(std::size_t n) : letters_(n, PauliLetter::I) {}

  PauliString(std::uint8_t phase_exponent, std::vector<PauliLetter> letters)
      : phase_k_(phase_exponent % 4), letters_(std::move(letters)) {}

  static PauliString identity(std::size_t n) { return PauliString(n); }

  /// Identity everywhere except `letter` at `pos`.
  static PauliString single(std::size_t n, std::size_t pos, PauliLetter letter) {
    if (pos >= n) throw std::out_of_range("Pauli position out of range");
    PauliString p(n);
    p.letters_[pos] = letter;
    return p;
  }

  /// Parses "+iXZY", "-Y", "XX", ... (optional sign, optional i, letters).
  static PauliString parse(std::string_view text) {
    std::uint8_t k = 0;
    std::size_t pos = 0;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      if (text[pos] == '-') k = 2;
      ++pos;
    }
    if (pos < text.size() && text[pos] == 'i') {
      k = static_cast<std::uint8_t>((k + 1) % 4);
      ++pos;
    }
    std::vector<PauliLetter> letters;
    for (; pos < text.size(); ++pos) letters.push_back(letter_from_char(text[pos]));
    if (letters.empty()) throw std::invalid_argument("empty Pauli string");
    return PauliString(k, std::move(letters));
  }

  std::size_t size() const { return letters_.size(); }
  std::uint8_t phase_exponent() const { return phase_k_; }

  /// i^k as a complex number.
  Complex phase() const {
    switch (phase_k_) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }

  PauliLetter letter(std::size_t i) const { return letters_.at(i); }
  const std::vector<PauliLetter>& letters() const { return letters_; }

  bool is_identity() const {
    if (phase_k_ != 0) return false;
    for (PauliLetter p : letters_) {
      if (p != PauliLetter::I) return false;
    }
    return true;
  }

  /// "+XZY" / "-iY" style rendering.
  std::string str() const {
    static constexpr const char* kPrefix[4] = {"+", "+i", "-", "-i"};
    std::string s = kPrefix[phase_k_];
    for (PauliLetter p : letters_) s += to_char(p);
    return s;
  }

  friend bool operator==(const PauliString&, const PauliString&) = default;

 private:
  std::uint8_t phase_k_ = 0;
  std::vector<PauliLetter> letters_;
};

/// Exact product p*q with accumulated phase.
inline PauliString multiply(const PauliString& p, const PauliString& q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("Pauli string length mismatch");
  }
  std::uint8_t k = static_cast<std::uint8_t>(
      (p.phase_exponent() + q.phase_exponent()) % 4);
  std::vector<PauliLetter> letters(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    auto [letter, dk] = detail::letter_product(p.letter(i), q.letter(i));
    letters[i] = letter;
    k = static_cast<std::uint8_t>((k + dk) % 4);
  }
  return PauliString(k, std::move(letters));
}

/// +1 if pq = qp, -1 if pq = -qp. Pauli strings always satisfy one of the two.
inline int commutation_sign(const PauliString& p, const PauliString& q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("Pauli string length mismatch");
  }
  std::size_t anti = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const PauliLetter a = p.letter(i);
    const PauliLetter b = q.letter(i);
    if (a != PauliLetter::I && b != PauliLetter::I && a != b) ++anti;
  }
  return (anti % 2 == 0) ? 1 : -1;
}

/// H p H on the chosen positions: X <-> Z, Y -> -Y, I -> I.
inline PauliString conjugate_by_hadamard(const PauliString& p,
                                         std::span<const std::size_t> positions) {
  std::uint8_t k = p.phase_exponent();
  std::vector<PauliLetter> letters = p.letters();
  for (std::size_t pos : positions) {
    if (pos >= letters.size()) {
      throw std::out_of_range("Hadamard position out of range");
    }
    switch (letters[pos]) {
      case PauliLetter::X: letters[pos] = PauliLetter::Z; break;
      case PauliLetter::Z: letters[pos] = PauliLetter::X; break;
      case PauliLetter::Y: k = static_cast<std::uint8_t>((k + 2) % 4); break;
      case PauliLetter::I: break;
    }
  }
  return PauliString(k, std::move(letters));
}

/// Conjugation by H on every position.
inline PauliString conjugate_by_hadamard(const PauliString& p) {
  std::vector<std::size_t> all(p.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return conjugate_by_hadamard(p, all);
}

inline Gate gate_for_letter(PauliLetter p) {
  switch (p) {
    case PauliLetter::I: return gates::identity();
    case PauliLetter::X: return gates::pauli_x();
    case PauliLetter::Y: return gates::pauli_y();
    case PauliLetter::Z: return gates::pauli_z();
  }
  return gates::identity();
}

struct PauliGates {
  std::vector<Gate> gates;  // one per qubit
  Complex global_phase;
};

/// Per-qubit gates plus the global phase i^k; applying both reproduces the
/// symbolic operator exactly.
inline PauliGates to_gates(const PauliString& p) {
  PauliGates out;
  out.gates.reserve(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    out.gates.push_back(gate_for_letter(p.letter(i)));
  }
  out.global_phase = p.phase();
  return out;
}

/// Applies the full operator, including the global phase.
inline StateVector apply_pauli(const StateVector& state, const PauliString& p) {
  if (p.size() != state.num_qubits()) {
    throw std::invalid_argument("Pauli string length does not match state");
  }
  StateVector out = state;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p.letter(i) != PauliLetter::I) {
      out = apply_gate(out, gate_for_letter(p.letter(i)), i);
    }
  }
  if (p.phase_exponent() != 0) {
    std::vector<Complex> amps = out.amplitudes();
    const Complex ph = p.phase();
    for (Complex& a : amps) a *= ph;
    out = StateVector(out.num_qubits(), std::move(amps));
  }
  return out;
}

}  // namespace aqs
