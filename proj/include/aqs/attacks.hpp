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

// Forgeries against the signature protocol and measurement of how well the
// (I,H)-type encryption detects them. The attacker is the verifier Bob,
// acting on the signature pair between receipt and transport; an outside
// eavesdropper would run the identical code path.

#pragma once

#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "aqs/pauli.hpp"
#include "aqs/protocol.hpp"
#include "aqs/qotp.hpp"
#include "aqs/random.hpp"
#include "aqs/statevector.hpp"

namespace aqs {

/// Result of one attacked session. `success` requires both acceptance and
/// that the state the verifier side ends up holding matches the attacker's
/// intended target up to global phase; acceptance alone is the weaker
/// non-detection statistic.
struct AttackOutcome {
  bool accepted = false;
  StateVector intended_target;
  StateVector delivered;
  bool success = false;
  TestMode detection_mode = TestMode::Projective;
};

/// Applies Q to both the clear message and the signature state, leaving the
/// Bell record alone. Against Pauli-only encryption the modified pair stays
/// valid because Q commutes with the signing chain up to a global sign.
inline SignaturePair forge_pauli(const SignaturePair& pair,
                                 const PauliString& q) {
  if (q.size() != pair.message.num_qubits()) {
    throw std::invalid_argument("forgery operator length mismatch");
  }
  return SignaturePair{apply_pauli(pair.message, q), pair.m_a_cipher,
                       apply_pauli(pair.signature, q)};
}

/// Record-exchange forgery: on each targeted qubit, flips the Phi/Psi bit of
/// the pad-encrypted Bell record (a ciphertext bit flip is a plaintext bit
/// flip) and applies sigma_x to message and signature. The arbiter's own
/// correction then rebuilds sigma_x|P> on those qubits.
inline SignaturePair forge_with_ma(const SignaturePair& pair,
                                   const std::vector<std::size_t>& targets) {
  const std::size_t n = pair.message.num_qubits();
  SignaturePair out = pair;
  for (std::size_t t : targets) {
    if (t >= n) throw std::out_of_range("forgery target qubit out of range");
    out.m_a_cipher[2 * t] ^= 1u;
    out.message = apply_gate(out.message, gates::pauli_x(), t);
    out.signature = apply_gate(out.signature, gates::pauli_x(), t);
  }
  return out;
}

/// Reorders message qubits, signature qubits, and Bell-record entries by the
/// same permutation. Keys are not (and cannot be) realigned by the attacker,
/// so whether the pair still verifies depends on the per-qubit keys.
inline SignaturePair permutation_attack(const SignaturePair& pair,
                                        std::span<const std::size_t> perm) {
  const std::size_t n = pair.message.num_qubits();
  if (perm.size() != n) {
    throw std::invalid_argument("permutation length does not match pair");
  }
  SignaturePair out{permute_qubits(pair.message, perm), BitString(2 * n),
                    permute_qubits(pair.signature, perm)};
  for (std::size_t i = 0; i < n; ++i) {
    out.m_a_cipher[2 * perm[i]] = pair.m_a_cipher[2 * i];
    out.m_a_cipher[2 * perm[i] + 1] = pair.m_a_cipher[2 * i + 1];
  }
  return out;
}

struct AttackPlan {
  enum class Kind { None, Pauli, MaExchange, Permutation, SymmetricDemo };

  Kind kind = Kind::None;
  PauliString pauli;                 // Kind::Pauli
  std::vector<std::size_t> targets;  // Kind::MaExchange
  std::vector<std::size_t> perm;     // Kind::Permutation

  static AttackPlan none() { return AttackPlan{}; }
  static AttackPlan pauli_forgery(PauliString q) {
    return AttackPlan{Kind::Pauli, std::move(q), {}, {}};
  }
  static AttackPlan ma_exchange(std::vector<std::size_t> targets) {
    return AttackPlan{Kind::MaExchange, {}, std::move(targets), {}};
  }
  static AttackPlan permutation(std::vector<std::size_t> perm) {
    return AttackPlan{Kind::Permutation, {}, {}, std::move(perm)};
  }

  std::string describe() const {
    switch (kind) {
      case Kind::None: return "none";
      case Kind::Pauli: return "pauli " + pauli.str();
      case Kind::MaExchange: {
        std::ostringstream os;
        os << "ma-exchange targets=";
        for (std::size_t i = 0; i < targets.size(); ++i) {
          if (i) os << ',';
          os << targets[i];
        }
        return os.str();
      }
      case Kind::Permutation: {
        std::ostringstream os;
        os << "permutation ";
        for (std::size_t i = 0; i < perm.size(); ++i) {
          if (i) os << ',';
          os << perm[i];
        }
        return os.str();
      }
      case Kind::SymmetricDemo: return "symmetric-demo";
    }
    return "?";
  }
};

namespace detail {

struct AttackedRun {
  ReturnedMaterials materials;
  StateVector reference;  // pre-forgery message
  StateVector target;     // what the attacker intends to deliver
};

inline AttackedRun run_attacked_pipeline(std::size_t n,
                                         const EncryptionScheme& scheme,
                                         Variant variant, TestMode mode,
                                         const AttackPlan& plan,
                                         const MessageSpec& spec, Rng& rng,
                                         Transcript* transcript) {
  InitResult init = initialize(n, rng, transcript);
  SignaturePair pair =
      sign(spec, init.key_at, init.session, scheme, rng, transcript);
  AttackedRun run{.materials = {}, .reference = pair.message, .target = pair.message};

  switch (plan.kind) {
    case AttackPlan::Kind::None:
      break;
    case AttackPlan::Kind::Pauli:
      pair = forge_pauli(pair, plan.pauli);
      run.target = apply_pauli(run.reference, plan.pauli);
      break;
    case AttackPlan::Kind::MaExchange: {
      pair = forge_with_ma(pair, plan.targets);
      StateVector t = run.reference;
      for (std::size_t q : plan.targets) {
        t = apply_gate(t, gates::pauli_x(), q);
      }
      run.target = std::move(t);
      break;
    }
    case AttackPlan::Kind::Permutation:
      pair = permutation_attack(pair, plan.perm);
      run.target = permute_qubits(run.reference, plan.perm);
      break;
    case AttackPlan::Kind::SymmetricDemo:
      throw std::invalid_argument(
          "symmetric-demo is a standalone demonstration, not a session attack");
  }
  if (transcript) transcript->add("attack " + plan.describe());

  TransmissionBundle bundle =
      bob_prepare(pair, init.key_bt, init.session, rng, transcript);
  run.materials = trent_verify(bundle, init.key_at, init.key_bt, init.session,
                               scheme, variant, mode, rng, transcript);
  return run;
}

}  // namespace detail

/// Runs one full session with the forgery applied between signing and
/// transport. Delivered state: the arbiter-decrypted message (variant A) or
/// the arbiter's GHZ reconstruction (variant B).
inline AttackOutcome attack_session(std::size_t n,
                                    const EncryptionScheme& scheme,
                                    Variant variant, TestMode mode,
                                    const AttackPlan& plan, Rng& rng,
                                    Transcript* transcript = nullptr) {
  detail::AttackedRun run = detail::run_attacked_pipeline(
      n, scheme, variant, mode, plan, MessageSpec::random_unknown(), rng,
      transcript);
  AttackOutcome outcome;
  outcome.detection_mode = mode;
  outcome.accepted = run.materials.verdict;
  outcome.intended_target = std::move(run.target);
  outcome.delivered = (variant == Variant::B && run.materials.trent_reconstruction)
                          ? *run.materials.trent_reconstruction
                          : run.materials.message;
  outcome.success =
      outcome.accepted &&
      equal_up_to_global_phase(outcome.delivered, outcome.intended_target);
  if (transcript) {
    std::ostringstream os;
    os << "attack_outcome accepted=" << (outcome.accepted ? "true" : "false")
       << " success=" << (outcome.success ? "true" : "false");
    transcript->add(os.str());
  }
  return outcome;
}

/// Fraction of trials in which the arbiter rejects a Pauli forgery under the
/// hardened (I,H)-type scheme. In projective mode the per-trial detection
/// probability is 1 - |<P| Q~† Q |P>|^2 with Q~ the Hadamard conjugate of Q.
inline double defense_detection_rate(std::size_t n, const PauliString& q,
                                     const MessageSpec& spec,
                                     std::size_t trials, TestMode mode,
                                     Rng& rng) {
  if (trials < 1) throw std::invalid_argument("need at least one trial");
  const EncryptionScheme scheme = EncryptionScheme::ih_type();
  std::size_t detected = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    detail::AttackedRun run = detail::run_attacked_pipeline(
        n, scheme, Variant::A, mode, AttackPlan::pauli_forgery(q), spec, rng,
        nullptr);
    if (!run.materials.verdict) ++detected;
  }
  return static_cast<double>(detected) / static_cast<double>(trials);
}

/// Exchange-symmetric joint state that is not a product of equal states:
/// (|01> + |10>)/sqrt(2) split across the two registers. It passes the swap
/// test on every shot even though the registers hold no equal pure states.
inline StateVector symmetric_joint_state() {
  const double s = 1.0 / std::sqrt(2.0);
  return StateVector(2, {0.0, s, s, 0.0});
}

/// Swap-test pass rate of the symmetric joint state over many shots.
inline double symmetric_state_demo(Rng& rng, std::size_t shots = 10000) {
  const StateVector joint = symmetric_joint_state();
  std::size_t passed = 0;
  for (std::size_t i = 0; i < shots; ++i) {
    if (swap_test_joint(joint, rng)) ++passed;
  }
  return static_cast<double>(passed) / static_cast<double>(shots);
}

}  // namespace aqs
