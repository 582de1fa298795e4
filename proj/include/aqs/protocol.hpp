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

// Three-role arbitrated signature protocol over GHZ triplets.
//
// Roles: Alice signs, Bob verifies, Trent arbitrates. Setup distributes one
// GHZ triplet (|000> + |111>)/sqrt(2) per message qubit, particles ordered
// (Alice, Bob, Trent), plus two shared keys (Alice-Trent and Bob-Trent).
//
// Signing: Alice prepares the product message |P>, key-rotates one copy into
// |R>, Bell-measures a second copy against her GHZ particles (recording the
// outcomes, pad-encrypted, as the Bell record), encrypts |R> into the
// signature state, and sends the clear third copy alongside.
//
// Transport: Bob X-measures his GHZ particles (the X record) and forwards
// everything to Trent under the transport pad.
//
// Verification: Trent decrypts and tests the signature against the
// re-rotated received message; in the record-checking variant he also
// rebuilds the message from his own GHZ particles via the correction table
// and compares. Bob finally recovers the message from Trent's returned
// particles the same way.
//
// Correction table (Bell outcome, X bit) -> Pauli fixing Trent's particle
// back to the message qubit, derived from the joint-state expansion:
//   (Phi+, +) -> I    (Phi+, -) -> Z    (Phi-, +) -> Z    (Phi-, -) -> I
//   (Psi+, +) -> X    (Psi+, -) -> XZ   (Psi-, +) -> XZ   (Psi-, -) -> X

#pragma once

#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "aqs/pauli.hpp"
#include "aqs/qotp.hpp"
#include "aqs/random.hpp"
#include "aqs/statevector.hpp"

namespace aqs {

enum class Variant { A, B };       // A: signature test only; B: plus GHZ reconstruction
enum class TestMode { Projective, Swap };

inline std::string variant_name(Variant v) { return v == Variant::A ? "A" : "B"; }
inline std::string test_mode_name(TestMode m) {
  return m == TestMode::Projective ? "projective" : "swap";
}

/// Ordered line-delimited record of protocol events for the CLI reporter.
struct Transcript {
  std::vector<std::string> lines;

  void add(std::string line) { lines.push_back(std::move(line)); }

  std::string str() const {
    std::string out;
    for (const std::string& l : lines) {
      out += l;
      out += '\n';
    }
    return out;
  }
};

enum class SessionPhase { Distributed, AliceMeasured, BobMeasured, Consumed };

inline std::string phase_name(SessionPhase p) {
  switch (p) {
    case SessionPhase::Distributed: return "distributed";
    case SessionPhase::AliceMeasured: return "alice-measured";
    case SessionPhase::BobMeasured: return "bob-measured";
    case SessionPhase::Consumed: return "consumed";
  }
  return "?";
}

/// One GHZ triplet per message qubit. Blocks shrink as particles are
/// measured: 3 qubits (Alice, Bob, Trent) while distributed, 2 (Bob, Trent)
/// after signing, 1 (Trent) after transport. The phase marker only moves
/// forward, so each particle is measured at most once.
struct GhzSession {
  std::vector<StateVector> blocks;
  SessionPhase phase = SessionPhase::Distributed;

  std::size_t num_message_qubits() const { return blocks.size(); }

  void require_phase(SessionPhase expected, const char* step) const {
    if (phase != expected) {
      throw std::logic_error(std::string("session reuse: ") + step +
                             " requires phase " + phase_name(expected) +
                             ", session is " + phase_name(phase));
    }
  }
};

struct InitResult {
  SecretKey key_at;
  SecretKey key_bt;
  GhzSession session;
};

/// Key generation plus GHZ preparation for n message qubits.
inline InitResult initialize(std::size_t n, Rng& rng, Transcript* transcript = nullptr) {
  if (n < 1) throw std::invalid_argument("need at least one message qubit");
  InitResult r;
  r.key_at = SecretKey::generate(KeyOwner::AliceTrent,
                                 KeySchedule::signer_bits_required(n), rng);
  r.key_bt = SecretKey::generate(KeyOwner::BobTrent,
                                 KeySchedule::transport_bits_required(n), rng);
  r.session.blocks.assign(n, make_ghz());
  if (transcript) {
    std::ostringstream os;
    os << "init n=" << n << " phase=" << phase_name(r.session.phase);
    transcript->add(os.str());
  }
  return r;
}

/// Message to sign: an explicit per-qubit preparation, or fresh Haar-random
/// qubits ("unknown message") drawn at signing time.
struct MessageSpec {
  std::vector<QubitState> qubits;  // empty means random

  static MessageSpec random_unknown() { return MessageSpec{}; }
  static MessageSpec known(std::vector<QubitState> qs) {
    return MessageSpec{std::move(qs)};
  }

  bool is_random() const { return qubits.empty(); }

  std::vector<QubitState> materialize(std::size_t n, Rng& rng) const {
    if (is_random()) {
      std::vector<QubitState> qs(n);
      for (QubitState& q : qs) q = haar_random_qubit(rng);
      return qs;
    }
    if (qubits.size() != n) {
      throw std::invalid_argument("message spec length does not match session");
    }
    return qubits;
  }
};

/// What Alice transmits: the clear message copy, the pad-encrypted Bell
/// record (2 bits per qubit), and the encrypted rotated state.
struct SignaturePair {
  StateVector message;
  BitString m_a_cipher;
  StateVector signature;
};

/// Signing: rotate, Bell-measure against the GHZ particles, encrypt.
/// Alice knows the preparation, so the simulator regenerates her copies
/// from the same per-qubit parameters.
inline SignaturePair sign(const MessageSpec& spec, const SecretKey& key_at,
                          GhzSession& session, const EncryptionScheme& scheme,
                          Rng& rng, Transcript* transcript = nullptr) {
  session.require_phase(SessionPhase::Distributed, "sign");
  const std::size_t n = session.num_message_qubits();
  const KeySchedule sched = KeySchedule::signer(key_at, n);
  const std::vector<QubitState> qubits = spec.materialize(n, rng);

  StateVector message = make_product_state(qubits);
  StateVector rotated = apply_pauli(message, rotation_op(sched));

  BitString record(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    // Joint order (message copy, Alice, Bob, Trent); Bell-measure the
    // first two, leaving the (Bob, Trent) residual in the session.
    StateVector joint =
        tensor(make_product_state({qubits[i]}), session.blocks[i]);
    auto [outcome, residual] = measure_bell(joint, 0, 1, rng);
    session.blocks[i] = std::move(residual);
    record[2 * i] = static_cast<Bit>(outcome.psi);
    record[2 * i + 1] = static_cast<Bit>(outcome.minus);
    if (transcript) {
      std::ostringstream os;
      os << "sign qubit=" << i << " bell=" << outcome.label();
      transcript->add(os.str());
    }
  }

  SignaturePair pair{std::move(message), classical_otp(record, sched.pad()),
                     encrypt(rotated, sched, scheme)};
  session.phase = SessionPhase::AliceMeasured;
  if (transcript) {
    // The record travels encrypted; its ciphertext is safe to log.
    transcript->add("sign scheme=" + scheme.name +
                    " record_cipher=" + to_hex(pair.m_a_cipher));
  }
  return pair;
}

/// What Bob forwards to Trent: both classical records (each under its own
/// pad) and the message/signature states under the transport pad.
struct TransmissionBundle {
  BitString m_a_cipher;
  BitString m_b_cipher;
  StateVector message_enc;
  StateVector signature_enc;
};

/// Transport: Bob X-measures his GHZ particles and pads everything with
/// the Bob-Trent key. Transport encryption is the plain Pauli pad; the
/// scheme choice only concerns the signature itself.
inline TransmissionBundle bob_prepare(const SignaturePair& pair,
                                      const SecretKey& key_bt,
                                      GhzSession& session, Rng& rng,
                                      Transcript* transcript = nullptr) {
  session.require_phase(SessionPhase::AliceMeasured, "transport");
  const std::size_t n = session.num_message_qubits();
  if (pair.message.num_qubits() != n || pair.signature.num_qubits() != n ||
      pair.m_a_cipher.size() != 2 * n) {
    throw std::invalid_argument("signature pair does not match session size");
  }
  const KeySchedule sched = KeySchedule::transport(key_bt, n);

  BitString xrecord(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto [bit, residual] = measure_x(session.blocks[i], 0, rng);
    session.blocks[i] = std::move(residual);
    xrecord[i] = static_cast<Bit>(bit);
    if (transcript) {
      std::ostringstream os;
      os << "transport qubit=" << i << " x=" << bit;
      transcript->add(os.str());
    }
  }

  const EncryptionScheme pad = EncryptionScheme::pauli_type();
  TransmissionBundle bundle{
      pair.m_a_cipher, classical_otp(xrecord, sched.pad()),
      encrypt(pair.message, sched.encryption(0, n), pad),
      encrypt(pair.signature, sched.encryption(n, n), pad)};
  session.phase = SessionPhase::BobMeasured;
  return bundle;
}

/// Pauli fixing Trent's GHZ particle back to the signed qubit, given the
/// Bell record entry and the X record bit for that qubit.
inline PauliString ghz_correction(const BellOutcome& outcome, int x_bit) {
  const bool z_needed = outcome.minus != (x_bit != 0);
  PauliString p = PauliString::identity(1);
  if (z_needed) p = PauliString::single(1, 0, PauliLetter::Z);
  if (outcome.psi) p = multiply(PauliString::single(1, 0, PauliLetter::X), p);
  return p;
}

/// Everything Trent sends back to Bob after arbitration, plus (for the
/// record-checking variant) the state Trent himself reconstructed.
struct ReturnedMaterials {
  bool verdict = false;
  StateVector message;
  std::vector<BellOutcome> m_a;
  BitString m_b;
  std::vector<StateVector> trent_particles;
  std::optional<StateVector> trent_reconstruction;
};

namespace detail {

/// Equality test of a candidate state against a reference. Projective mode
/// measures the rank-1 projector onto the reference (Born rule, with exact
/// and orthogonal overlaps resolved deterministically); swap mode is one
/// shot of the swap test.
inline bool equality_test(const StateVector& candidate,
                          const StateVector& reference, TestMode mode,
                          Rng& rng) {
  if (mode == TestMode::Projective) {
    constexpr double kClamp = 1e-12;
    const double p = fidelity(reference, candidate);
    if (p >= 1.0 - kClamp) return true;
    if (p <= kClamp) return false;
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
  }
  return swap_test(reference, candidate, rng);
}

inline std::vector<BellOutcome> decode_bell_record(const BitString& bits) {
  std::vector<BellOutcome> outcomes(bits.size() / 2);
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    outcomes[i] = BellOutcome{bits[2 * i] != 0, bits[2 * i + 1] != 0};
  }
  return outcomes;
}

inline StateVector reconstruct_from_particles(
    const std::vector<StateVector>& particles,
    const std::vector<BellOutcome>& m_a, const BitString& m_b) {
  StateVector out;  // scalar; tensor grows it qubit by qubit
  for (std::size_t i = 0; i < particles.size(); ++i) {
    out = tensor(out, apply_pauli(particles[i], ghz_correction(m_a[i], m_b[i])));
  }
  return out;
}

}  // namespace detail

/// Arbitration: Trent decrypts the bundle, tests the signature against the
/// re-rotated received message, and in variant B additionally rebuilds the
/// message from his GHZ particles using both records and compares that too.
/// Returns the verdict together with the materials listed for Bob.
inline ReturnedMaterials trent_verify(const TransmissionBundle& bundle,
                                      const SecretKey& key_at,
                                      const SecretKey& key_bt,
                                      GhzSession& session,
                                      const EncryptionScheme& scheme,
                                      Variant variant, TestMode mode, Rng& rng,
                                      Transcript* transcript = nullptr) {
  session.require_phase(SessionPhase::BobMeasured, "verify");
  const std::size_t n = session.num_message_qubits();
  if (bundle.message_enc.num_qubits() != n ||
      bundle.signature_enc.num_qubits() != n ||
      bundle.m_a_cipher.size() != 2 * n || bundle.m_b_cipher.size() != n) {
    throw std::invalid_argument("malformed bundle");
  }
  const KeySchedule tsched = KeySchedule::transport(key_bt, n);
  const KeySchedule ssched = KeySchedule::signer(key_at, n);
  const EncryptionScheme pad = EncryptionScheme::pauli_type();

  ReturnedMaterials out;
  out.m_b = classical_otp(bundle.m_b_cipher, tsched.pad());
  out.m_a = detail::decode_bell_record(
      classical_otp(bundle.m_a_cipher, ssched.pad()));
  out.message = decrypt(bundle.message_enc, tsched.encryption(0, n), pad);
  StateVector sig = decrypt(bundle.signature_enc, tsched.encryption(n, n), pad);

  const StateVector candidate = decrypt(sig, ssched, scheme);
  const StateVector target = apply_pauli(out.message, rotation_op(ssched));
  const bool rotation_test = detail::equality_test(candidate, target, mode, rng);

  bool reconstruction_test = true;
  if (variant == Variant::B) {
    StateVector recon =
        detail::reconstruct_from_particles(session.blocks, out.m_a, out.m_b);
    reconstruction_test = detail::equality_test(recon, out.message, mode, rng);
    out.trent_reconstruction = std::move(recon);
  }

  out.verdict = rotation_test && reconstruction_test;
  out.trent_particles = session.blocks;
  if (transcript) {
    std::ostringstream os;
    os << "verify variant=" << variant_name(variant)
       << " mode=" << test_mode_name(mode)
       << " rotation_test=" << (rotation_test ? "pass" : "fail");
    if (variant == Variant::B) {
      os << " reconstruction_test=" << (reconstruction_test ? "pass" : "fail");
    }
    os << " verdict=" << (out.verdict ? "accept" : "reject");
    transcript->add(os.str());
  }
  return out;
}

struct VerificationResult {
  bool accepted = false;
  bool trent_test_passed = false;
  bool bob_test_passed = false;
  double recovered_fidelity = 0.0;
};

/// Recovery: Bob corrects Trent's returned particles with both records,
/// equality-tests the result against the received message, and reports the
/// fidelity against the experiment-supplied reference state. Requires a
/// TRUE verdict; consumes the session.
inline VerificationResult bob_recover(const ReturnedMaterials& materials,
                                      GhzSession& session,
                                      const StateVector& reference,
                                      TestMode mode, Rng& rng,
                                      Transcript* transcript = nullptr) {
  session.require_phase(SessionPhase::BobMeasured, "recover");
  if (!materials.verdict) {
    throw std::logic_error("recovery requires a TRUE arbitration verdict");
  }
  const std::size_t n = session.num_message_qubits();
  if (materials.m_a.size() != n || materials.m_b.size() != n ||
      materials.trent_particles.size() != n) {
    throw std::invalid_argument("malformed returned materials");
  }
  const StateVector recovered = detail::reconstruct_from_particles(
      materials.trent_particles, materials.m_a, materials.m_b);
  const bool bob_test =
      detail::equality_test(recovered, materials.message, mode, rng);
  session.phase = SessionPhase::Consumed;

  VerificationResult result;
  result.trent_test_passed = materials.verdict;
  result.bob_test_passed = bob_test;
  result.accepted = materials.verdict && bob_test;
  result.recovered_fidelity = fidelity(reference, recovered);
  if (transcript) {
    std::ostringstream os;
    os << "recover equality=" << (bob_test ? "pass" : "fail")
       << " fidelity=" << result.recovered_fidelity
       << " accepted=" << (result.accepted ? "true" : "false");
    transcript->add(os.str());
  }
  return result;
}

/// Full honest pipeline on a fresh random message.
inline VerificationResult run_honest_session(std::size_t n,
                                             const EncryptionScheme& scheme,
                                             Variant variant, TestMode mode,
                                             Rng& rng,
                                             Transcript* transcript = nullptr) {
  InitResult init = initialize(n, rng, transcript);
  SignaturePair pair = sign(MessageSpec::random_unknown(), init.key_at,
                            init.session, scheme, rng, transcript);
  const StateVector reference = pair.message;
  TransmissionBundle bundle =
      bob_prepare(pair, init.key_bt, init.session, rng, transcript);
  ReturnedMaterials materials =
      trent_verify(bundle, init.key_at, init.key_bt, init.session, scheme,
                   variant, mode, rng, transcript);
  if (!materials.verdict) {
    if (transcript) transcript->add("recover skipped=arbiter-rejected");
    return VerificationResult{false, false, false, 0.0};
  }
  return bob_recover(materials, init.session, reference, mode, rng, transcript);
}

}  // namespace aqs
