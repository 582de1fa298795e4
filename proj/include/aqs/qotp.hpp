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

// Quantum one-time-pad machinery: shared secret keys and their partition
// into per-qubit rotation / encryption bit pairs plus a classical pad,
// Pauli-type and (U,V)-type encryption, and the orthonormal-basis validity
// check for encryption operator sets.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "aqs/matrix.hpp"
#include "aqs/pauli.hpp"
#include "aqs/random.hpp"
#include "aqs/statevector.hpp"

namespace aqs {

using Bit = std::uint8_t;
using BitString = std::vector<Bit>;

inline BitString random_bits(std::size_t count, Rng& rng) {
  BitString bits(count);
  std::uniform_int_distribution<int> coin(0, 1);
  for (Bit& b : bits) b = static_cast<Bit>(coin(rng));
  return bits;
}

/// Bitwise XOR pad. Flipping a ciphertext bit flips exactly the matching
/// plaintext bit, which is what the record-tampering attack exploits.
inline BitString classical_otp(const BitString& bits, const BitString& keystream) {
  if (bits.size() != keystream.size()) {
    throw std::invalid_argument("pad length does not match message length");
  }
  BitString out(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    out[i] = static_cast<Bit>(bits[i] ^ keystream[i]);
  }
  return out;
}

/// Hex rendering (MSB-first per nibble) for experiment logs.
inline std::string to_hex(const BitString& bits) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve((bits.size() + 3) / 4);
  unsigned nibble = 0;
  std::size_t filled = 0;
  for (Bit b : bits) {
    nibble = (nibble << 1) | (b & 1u);
    if (++filled == 4) {
      out += kDigits[nibble];
      nibble = 0;
      filled = 0;
    }
  }
  if (filled > 0) out += kDigits[nibble << (4 - filled)];
  return out;
}

enum class KeyOwner { AliceTrent, BobTrent };

struct SecretKey {
  KeyOwner owner = KeyOwner::AliceTrent;
  BitString bits;

  static SecretKey generate(KeyOwner owner, std::size_t num_bits, Rng& rng) {
    return SecretKey{owner, random_bits(num_bits, rng)};
  }
};

/// Per-qubit (x, z) exponent pair read from a key segment.
struct KeyBitPair {
  Bit x = 0;
  Bit z = 0;
};

/// Partition of one secret key into disjoint segments: rotation pairs,
/// encryption pairs, and a classical pad for the measurement records.
class KeySchedule {
 public:
  static std::size_t signer_bits_required(std::size_t n) { return 6 * n; }
  static std::size_t transport_bits_required(std::size_t n) { return 5 * n; }

  /// Signer key layout for n message qubits: rotation 2n bits, encryption
  /// 2n bits, Bell-record pad 2n bits.
  static KeySchedule signer(const SecretKey& key, std::size_t n) {
    if (key.owner != KeyOwner::AliceTrent) {
      throw std::invalid_argument("signer schedule requires the Alice-Trent key");
    }
    if (key.bits.size() < signer_bits_required(n)) {
      throw std::invalid_argument("secret key too short for signer schedule");
    }
    KeySchedule s;
    s.rotation_ = read_pairs(key.bits, 0, n);
    s.encryption_ = read_pairs(key.bits, 2 * n, n);
    s.pad_.assign(key.bits.begin() + static_cast<std::ptrdiff_t>(4 * n),
                  key.bits.begin() + static_cast<std::ptrdiff_t>(6 * n));
    return s;
  }

  /// Transport key layout for n message qubits: encryption pairs for the
  /// 2n transported qubits (message then signature), X-record pad n bits.
  static KeySchedule transport(const SecretKey& key, std::size_t n) {
    if (key.owner != KeyOwner::BobTrent) {
      throw std::invalid_argument("transport schedule requires the Bob-Trent key");
    }
    if (key.bits.size() < transport_bits_required(n)) {
      throw std::invalid_argument("secret key too short for transport schedule");
    }
    KeySchedule s;
    s.encryption_ = read_pairs(key.bits, 0, 2 * n);
    s.pad_.assign(key.bits.begin() + static_cast<std::ptrdiff_t>(4 * n),
                  key.bits.begin() + static_cast<std::ptrdiff_t>(5 * n));
    return s;
  }

  std::span<const KeyBitPair> rotation() const { return rotation_; }
  std::span<const KeyBitPair> encryption() const { return encryption_; }
  std::span<const KeyBitPair> encryption(std::size_t offset,
                                         std::size_t count) const {
    if (offset + count > encryption_.size()) {
      throw std::out_of_range("encryption slice out of range");
    }
    return std::span<const KeyBitPair>(encryption_).subspan(offset, count);
  }
  const BitString& pad() const { return pad_; }

 private:
  static std::vector<KeyBitPair> read_pairs(const BitString& bits,
                                            std::size_t offset,
                                            std::size_t count) {
    std::vector<KeyBitPair> pairs(count);
    for (std::size_t i = 0; i < count; ++i) {
      pairs[i] = KeyBitPair{bits[offset + 2 * i], bits[offset + 2 * i + 1]};
    }
    return pairs;
  }

  std::vector<KeyBitPair> rotation_;
  std::vector<KeyBitPair> encryption_;
  BitString pad_;
};

// ---------------------------------------------------------------------------
// Encryption schemes
// ---------------------------------------------------------------------------

enum class SchemeFamily { PauliType, UVType };

/// Key-selected operator family for one qubit: sigma_x^x sigma_z^z for the
/// Pauli type, or U sigma_x^x sigma_z^z V for the (U,V) type.
struct EncryptionScheme {
  SchemeFamily family = SchemeFamily::PauliType;
  Gate u = gates::identity();
  Gate v = gates::identity();
  std::string name = "pauli";

  static EncryptionScheme pauli_type() { return EncryptionScheme{}; }

  static EncryptionScheme uv_type(const Gate& u, const Gate& v,
                                  std::string name = "uv") {
    if (!u.is_unitary() || !v.is_unitary()) {
      throw std::invalid_argument("encryption scheme gates must be unitary");
    }
    return EncryptionScheme{SchemeFamily::UVType, u, v, std::move(name)};
  }

  static EncryptionScheme ih_type() {
    return uv_type(gates::identity(), gates::hadamard(), "ih");
  }
};

/// Exact Pauli string sigma_x^x sigma_z^z per qubit (both bits set gives
/// -iY), shared by the rotation and the Pauli-type encryption.
inline PauliString pauli_from_xz(std::span<const KeyBitPair> pairs) {
  std::uint8_t k = 0;
  std::vector<PauliLetter> letters(pairs.size(), PauliLetter::I);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const bool x = pairs[i].x != 0;
    const bool z = pairs[i].z != 0;
    if (x && z) {
      letters[i] = PauliLetter::Y;
      k = static_cast<std::uint8_t>((k + 3) % 4);
    } else if (x) {
      letters[i] = PauliLetter::X;
    } else if (z) {
      letters[i] = PauliLetter::Z;
    }
  }
  return PauliString(k, std::move(letters));
}

/// The random rotation as a symbolic Pauli string over the rotation segment.
inline PauliString rotation_op(const KeySchedule& schedule) {
  if (schedule.rotation().empty()) {
    throw std::invalid_argument("schedule has no rotation segment");
  }
  return pauli_from_xz(schedule.rotation());
}

namespace detail {

inline void check_pairs(std::span<const KeyBitPair> pairs, std::size_t n) {
  if (pairs.size() < n) {
    throw std::invalid_argument("encryption schedule too short for state");
  }
}

}  // namespace detail

/// One-time encryption: per qubit i applies sigma_x^x sigma_z^z (Pauli type)
/// or U sigma_x^x sigma_z^z V ((U,V) type) with (x, z) = pairs[i].
inline StateVector encrypt(const StateVector& state,
                           std::span<const KeyBitPair> pairs,
                           const EncryptionScheme& scheme) {
  detail::check_pairs(pairs, state.num_qubits());
  StateVector out = state;
  const bool uv = scheme.family == SchemeFamily::UVType;
  for (std::size_t i = 0; i < state.num_qubits(); ++i) {
    if (uv) out = apply_gate(out, scheme.v, i);
    if (pairs[i].z) out = apply_gate(out, gates::pauli_z(), i);
    if (pairs[i].x) out = apply_gate(out, gates::pauli_x(), i);
    if (uv) out = apply_gate(out, scheme.u, i);
  }
  return out;
}

/// Exact inverse of encrypt.
inline StateVector decrypt(const StateVector& state,
                           std::span<const KeyBitPair> pairs,
                           const EncryptionScheme& scheme) {
  detail::check_pairs(pairs, state.num_qubits());
  StateVector out = state;
  const bool uv = scheme.family == SchemeFamily::UVType;
  for (std::size_t i = 0; i < state.num_qubits(); ++i) {
    if (uv) out = apply_gate(out, adjoint(scheme.u), i);
    if (pairs[i].x) out = apply_gate(out, gates::pauli_x(), i);
    if (pairs[i].z) out = apply_gate(out, gates::pauli_z(), i);
    if (uv) out = apply_gate(out, adjoint(scheme.v), i);
  }
  return out;
}

inline StateVector encrypt(const StateVector& state, const KeySchedule& schedule,
                           const EncryptionScheme& scheme) {
  return encrypt(state, schedule.encryption(), scheme);
}

inline StateVector decrypt(const StateVector& state, const KeySchedule& schedule,
                           const EncryptionScheme& scheme) {
  return decrypt(state, schedule.encryption(), scheme);
}

/// The four single-qubit operators {U P_k V} induced by a scheme, in the
/// key order (x, z) = 00, 01, 10, 11.
inline std::vector<ComplexMatrix> scheme_operator_set(
    const EncryptionScheme& scheme) {
  const ComplexMatrix u = ComplexMatrix::from_gate(
      scheme.family == SchemeFamily::UVType ? scheme.u : gates::identity());
  const ComplexMatrix v = ComplexMatrix::from_gate(
      scheme.family == SchemeFamily::UVType ? scheme.v : gates::identity());
  std::vector<ComplexMatrix> ops;
  ops.reserve(4);
  for (int x = 0; x < 2; ++x) {
    for (int z = 0; z < 2; ++z) {
      ComplexMatrix p = ComplexMatrix::identity(2);
      if (z) p = ComplexMatrix::from_gate(gates::pauli_z()) * p;
      if (x) p = ComplexMatrix::from_gate(gates::pauli_x()) * p;
      ops.push_back(u * p * v);
    }
  }
  return ops;
}

// ---------------------------------------------------------------------------
// Encryption-set validity
// ---------------------------------------------------------------------------

struct SetValidation {
  bool valid = false;
  std::string reason;  // empty when valid
};

/// A set {p_k, U_k} is a valid one-time encryption iff the operators form
/// an orthonormal basis under the Hilbert-Schmidt inner product,
/// Tr(U_j† U_k) = d delta_jk, with d^2 equally likely members.
inline SetValidation validate_encryption_set(
    const std::vector<ComplexMatrix>& operators,
    const std::vector<double>& probabilities, double tol = 1e-9) {
  if (operators.empty()) return {false, "operator set is empty"};
  const std::size_t d = operators.front().dim();
  for (std::size_t k = 0; k < operators.size(); ++k) {
    if (operators[k].dim() != d) {
      return {false, "operator " + std::to_string(k) + " has mismatched dimension"};
    }
  }
  if (probabilities.size() != operators.size()) {
    return {false, "probability count does not match operator count"};
  }
  if (operators.size() != d * d) {
    return {false, "expected " + std::to_string(d * d) + " operators for dimension " +
                       std::to_string(d) + ", got " + std::to_string(operators.size())};
  }
  for (std::size_t k = 0; k < operators.size(); ++k) {
    if (!operators[k].is_unitary(tol)) {
      return {false, "operator " + std::to_string(k) + " is not unitary"};
    }
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < probabilities.size(); ++k) {
    if (std::abs(probabilities[k] - probabilities[0]) > tol) {
      return {false, "probabilities are not all equal"};
    }
    sum += probabilities[k];
  }
  if (std::abs(sum - 1.0) > tol) {
    return {false, "probabilities do not sum to 1"};
  }
  for (std::size_t j = 0; j < operators.size(); ++j) {
    for (std::size_t k = 0; k < operators.size(); ++k) {
      const Complex t = hilbert_schmidt_inner(operators[j], operators[k]);
      const Complex expect = (j == k) ? Complex(static_cast<double>(d)) : Complex(0.0);
      if (std::abs(t - expect) > tol) {
        return {false, "operators " + std::to_string(j) + "," + std::to_string(k) +
                           " violate Hilbert-Schmidt orthonormality"};
      }
    }
  }
  return {true, ""};
}

}  // namespace aqs
