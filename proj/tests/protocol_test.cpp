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

#include "aqs/protocol.hpp"

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "testutil.hpp"

using namespace aqs;
using testutil::expect_state_near;
using testutil::expect_states_near;
using testutil::expect_within_3sigma;

namespace {

const double kS2 = 1.0 / std::sqrt(2.0);

// Analytic residuals of (a|0> + b|1>) (x) GHZ, derived by expanding the
// joint state in the Bell basis of the first particle pair and then the X
// basis of the Bob particle. Signs are kept: the Psi- family carries an
// overall minus.

StateVector analytic_bell_residual(const QubitState& p, const BellOutcome& o) {
  const Complex a = p.a, b = p.b;
  if (!o.psi) {
    return StateVector(2, {a, 0.0, 0.0, o.minus ? -b : b});
  }
  return StateVector(2, {o.minus ? -b : b, 0.0, 0.0, a});
}

StateVector analytic_trent_residual(const QubitState& p, const BellOutcome& o,
                                    int x) {
  const Complex a = p.a, b = p.b;
  if (!o.psi) {
    const bool flip = o.minus != (x == 1);
    return StateVector(1, {a, flip ? -b : b});
  }
  return StateVector(1, {o.minus ? -b : b, x ? -a : a});
}

SecretKey zero_signer_key(std::size_t n) {
  return SecretKey{KeyOwner::AliceTrent, BitString(6 * n, 0)};
}

}  // namespace

// ---------- initialization ----------

TEST(Initialize, PreparesGhzTripletsAndKeys) {
  Rng rng(1);
  const InitResult init = initialize(1, rng);
  EXPECT_EQ(init.session.phase, SessionPhase::Distributed);
  ASSERT_EQ(init.session.blocks.size(), 1u);
  expect_state_near(init.session.blocks[0],
                    {kS2, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, kS2});
  EXPECT_EQ(init.key_at.bits.size(), 6u);
  EXPECT_EQ(init.key_bt.bits.size(), 5u);
  EXPECT_EQ(init.key_at.owner, KeyOwner::AliceTrent);
  EXPECT_EQ(init.key_bt.owner, KeyOwner::BobTrent);
}

TEST(Initialize, KeyBitsUnbiasedAcrossSessions) {
  Rng rng(2);
  std::size_t ones = 0, total = 0;
  for (int i = 0; i < 2500; ++i) {
    const InitResult init = initialize(4, rng);
    for (Bit b : init.key_at.bits) {
      ones += b;
      ++total;
    }
    for (Bit b : init.key_bt.bits) {
      ones += b;
      ++total;
    }
  }
  ASSERT_GE(total, 100000u);
  expect_within_3sigma(ones, total, 0.5, "session key bits");
}

TEST(Initialize, RejectsZeroQubits) {
  Rng rng(3);
  EXPECT_THROW(initialize(0, rng), std::invalid_argument);
}

// ---------- correction table ----------

TEST(CorrectionTable, RederivedByBruteForceOnAllBranches) {
  // For every (Bell outcome, X bit) branch: project the joint state, then
  // search {I, Z, X, XZ} with dense matrices for the operator that restores
  // the message qubit. Exactly one candidate works, and it must match
  // ghz_correction.
  Rng rng(4);
  const char* candidates[] = {"I", "Z", "X"};
  for (int rep = 0; rep < 20; ++rep) {
    const QubitState p = haar_random_qubit(rng);
    const StateVector joint = tensor(make_product_state({p}), make_ghz());
    const StateVector message = make_product_state({p});
    for (const BellOutcome& o : kBellOutcomes) {
      const BellProjection bp = project_bell(joint, 0, 1, o);
      ASSERT_NEAR(bp.probability, 0.25, 1e-12);
      for (int x = 0; x < 2; ++x) {
        const XProjection xp = project_x(bp.state, 0, x);
        ASSERT_NEAR(xp.probability, 0.5, 1e-12);
        // Brute-force search, including the product X*Z.
        PauliString found = PauliString::identity(1);
        int matches = 0;
        std::vector<PauliString> pool;
        for (const char* c : candidates) pool.push_back(PauliString::parse(c));
        pool.push_back(multiply(PauliString::parse("X"), PauliString::parse("Z")));
        for (const PauliString& cand : pool) {
          const oracle::Vec fixed =
              oracle::matvec(oracle::pauli_string_matrix(cand),
                             oracle::to_vec(xp.state));
          if (std::abs(oracle::vdot(oracle::to_vec(message), fixed)) >
              1.0 - 1e-9) {
            found = cand;
            ++matches;
          }
        }
        ASSERT_EQ(matches, 1) << o.label() << " x=" << x;
        const PauliString table = ghz_correction(o, x);
        EXPECT_EQ(found.letters(), table.letters())
            << o.label() << " x=" << x;
        // And the table entry restores the message exactly up to phase.
        EXPECT_NEAR(fidelity(apply_pauli(xp.state, table), message), 1.0, 1e-12);
      }
    }
  }
}

TEST(CorrectionTable, ExpectedEntries) {
  EXPECT_EQ(ghz_correction(BellOutcome{false, false}, 0).str(), "+I");
  EXPECT_EQ(ghz_correction(BellOutcome{false, false}, 1).str(), "+Z");
  EXPECT_EQ(ghz_correction(BellOutcome{false, true}, 0).str(), "+Z");
  EXPECT_EQ(ghz_correction(BellOutcome{false, true}, 1).str(), "+I");
  EXPECT_EQ(ghz_correction(BellOutcome{true, false}, 0).str(), "+X");
  EXPECT_EQ(ghz_correction(BellOutcome{true, false}, 1).str(), "-iY");  // X*Z
  EXPECT_EQ(ghz_correction(BellOutcome{true, true}, 0).str(), "-iY");
  EXPECT_EQ(ghz_correction(BellOutcome{true, true}, 1).str(), "+X");
}

TEST(GhzExpansion, ResidualsMatchAnalyticBranches) {
  // Simulated post-measurement states match the analytic expansion
  // amplitude-wise, sign included.
  Rng rng(5);
  for (int rep = 0; rep < 100; ++rep) {
    const QubitState p = haar_random_qubit(rng);
    const StateVector joint = tensor(make_product_state({p}), make_ghz());
    for (const BellOutcome& o : kBellOutcomes) {
      const BellProjection bp = project_bell(joint, 0, 1, o);
      expect_states_near(bp.state, analytic_bell_residual(p, o));
      for (int x = 0; x < 2; ++x) {
        const XProjection xp = project_x(bp.state, 0, x);
        ASSERT_NEAR(xp.probability, 0.5, 1e-12);
        expect_states_near(xp.state, analytic_trent_residual(p, o, x));
      }
    }
  }
}

TEST(GhzExpansion, RecordExchangeEqualsPauliXOnAllBranches) {
  // Flipping the Phi/Psi bit of the record makes the corrector rebuild
  // sigma_x |P> instead of |P>, on every one of the 8 branches.
  Rng rng(6);
  const QubitState p = haar_random_qubit(rng);
  const StateVector flipped =
      apply_gate(make_product_state({p}), gates::pauli_x(), 0);
  for (const BellOutcome& o : kBellOutcomes) {
    const BellOutcome exchanged{!o.psi, o.minus};
    for (int x = 0; x < 2; ++x) {
      const StateVector residual = analytic_trent_residual(p, o, x);
      const StateVector rebuilt =
          apply_pauli(residual, ghz_correction(exchanged, x));
      EXPECT_NEAR(fidelity(rebuilt, flipped), 1.0, 1e-12)
          << o.label() << " x=" << x;
    }
  }
}

// ---------- signing ----------

TEST(Sign, ZeroKeySignatureEqualsMessage) {
  Rng rng(7);
  GhzSession session;
  session.blocks.assign(1, make_ghz());
  const SignaturePair pair =
      sign(MessageSpec::known({QubitState{1.0, 0.0}}), zero_signer_key(1),
           session, EncryptionScheme::pauli_type(), rng);
  expect_state_near(pair.signature, {1.0, 0.0});
  expect_state_near(pair.message, {1.0, 0.0});
  EXPECT_EQ(session.phase, SessionPhase::AliceMeasured);
}

TEST(Sign, SessionReuseThrows) {
  Rng rng(8);
  InitResult init = initialize(1, rng);
  sign(MessageSpec::random_unknown(), init.key_at, init.session,
       EncryptionScheme::pauli_type(), rng);
  EXPECT_THROW(sign(MessageSpec::random_unknown(), init.key_at, init.session,
                    EncryptionScheme::pauli_type(), rng),
               std::logic_error);
}

TEST(Sign, MessageSpecLengthMismatchThrows) {
  Rng rng(9);
  InitResult init = initialize(2, rng);
  EXPECT_THROW(sign(MessageSpec::known({QubitState{1.0, 0.0}}), init.key_at,
                    init.session, EncryptionScheme::pauli_type(), rng),
               std::invalid_argument);
}

TEST(Sign, BellRecordUniformOverOutcomes) {
  Rng rng(10);
  std::array<std::size_t, 4> counts{};
  const std::size_t shots = 10000;
  for (std::size_t i = 0; i < shots; ++i) {
    InitResult init = initialize(1, rng);
    const KeySchedule sched = KeySchedule::signer(init.key_at, 1);
    const SignaturePair pair =
        sign(MessageSpec::random_unknown(), init.key_at, init.session,
             EncryptionScheme::pauli_type(), rng);
    const BitString record = classical_otp(pair.m_a_cipher, sched.pad());
    const BellOutcome o{record[0] != 0, record[1] != 0};
    ++counts[o.index()];
  }
  for (std::size_t k = 0; k < 4; ++k) {
    expect_within_3sigma(counts[k], shots, 0.25, "Bell record frequency");
  }
}

// ---------- transport ----------

TEST(BobPrepare, TrentDecryptsExactStates) {
  Rng rng(11);
  InitResult init = initialize(2, rng);
  const SignaturePair pair =
      sign(MessageSpec::random_unknown(), init.key_at, init.session,
           EncryptionScheme::pauli_type(), rng);
  const TransmissionBundle bundle =
      bob_prepare(pair, init.key_bt, init.session, rng);
  EXPECT_EQ(init.session.phase, SessionPhase::BobMeasured);

  const KeySchedule tsched = KeySchedule::transport(init.key_bt, 2);
  const EncryptionScheme pad = EncryptionScheme::pauli_type();
  expect_states_near(decrypt(bundle.message_enc, tsched.encryption(0, 2), pad),
                     pair.message);
  expect_states_near(decrypt(bundle.signature_enc, tsched.encryption(2, 2), pad),
                     pair.signature);
  EXPECT_EQ(bundle.m_a_cipher, pair.m_a_cipher);
}

TEST(BobPrepare, XRecordUnbiased) {
  Rng rng(12);
  const std::size_t shots = 10000;
  std::size_t ones = 0;
  for (std::size_t i = 0; i < shots; ++i) {
    InitResult init = initialize(1, rng);
    const SignaturePair pair =
        sign(MessageSpec::random_unknown(), init.key_at, init.session,
             EncryptionScheme::pauli_type(), rng);
    const TransmissionBundle bundle =
        bob_prepare(pair, init.key_bt, init.session, rng);
    const KeySchedule tsched = KeySchedule::transport(init.key_bt, 1);
    ones += classical_otp(bundle.m_b_cipher, tsched.pad())[0];
  }
  expect_within_3sigma(ones, shots, 0.5, "X record bias");
}

TEST(BobPrepare, RequiresSignedSession) {
  Rng rng(13);
  InitResult init = initialize(1, rng);
  const SignaturePair bogus{StateVector(1), BitString(2, 0), StateVector(1)};
  EXPECT_THROW(bob_prepare(bogus, init.key_bt, init.session, rng),
               std::logic_error);
}

// ---------- verification ----------

TEST(TrentVerify, HonestRunPassesEveryVariantAndMode) {
  Rng rng(14);
  for (Variant variant : {Variant::A, Variant::B}) {
    for (TestMode mode : {TestMode::Projective, TestMode::Swap}) {
      for (const EncryptionScheme& scheme :
           {EncryptionScheme::pauli_type(), EncryptionScheme::ih_type()}) {
        InitResult init = initialize(2, rng);
        const SignaturePair pair =
            sign(MessageSpec::random_unknown(), init.key_at, init.session,
                 scheme, rng);
        const TransmissionBundle bundle =
            bob_prepare(pair, init.key_bt, init.session, rng);
        const ReturnedMaterials materials =
            trent_verify(bundle, init.key_at, init.key_bt, init.session,
                         scheme, variant, mode, rng);
        EXPECT_TRUE(materials.verdict)
            << variant_name(variant) << " " << test_mode_name(mode) << " "
            << scheme.name;
        expect_states_near(materials.message, pair.message, 1e-9);
        if (variant == Variant::B) {
          ASSERT_TRUE(materials.trent_reconstruction.has_value());
          EXPECT_NEAR(
              fidelity(*materials.trent_reconstruction, materials.message),
              1.0, 1e-9);
        }
      }
    }
  }
}

TEST(TrentVerify, OrthogonalMessageRejectedDeterministicallyInProjective) {
  Rng rng(15);
  for (int rep = 0; rep < 200; ++rep) {
    InitResult init = initialize(1, rng);
    SignaturePair pair =
        sign(MessageSpec::known({QubitState{1.0, 0.0}}), init.key_at,
             init.session, EncryptionScheme::pauli_type(), rng);
    pair.message = StateVector(1, {0.0, 1.0});  // swap in an orthogonal state
    const TransmissionBundle bundle =
        bob_prepare(pair, init.key_bt, init.session, rng);
    const ReturnedMaterials materials = trent_verify(
        bundle, init.key_at, init.key_bt, init.session,
        EncryptionScheme::pauli_type(), Variant::A, TestMode::Projective, rng);
    EXPECT_FALSE(materials.verdict);
  }
}

TEST(TrentVerify, OrthogonalMessageRejectedHalfTheTimeInSwapMode) {
  Rng rng(16);
  const std::size_t shots = 10000;
  std::size_t rejects = 0;
  for (std::size_t i = 0; i < shots; ++i) {
    InitResult init = initialize(1, rng);
    SignaturePair pair =
        sign(MessageSpec::known({QubitState{1.0, 0.0}}), init.key_at,
             init.session, EncryptionScheme::pauli_type(), rng);
    pair.message = StateVector(1, {0.0, 1.0});
    const TransmissionBundle bundle =
        bob_prepare(pair, init.key_bt, init.session, rng);
    const ReturnedMaterials materials = trent_verify(
        bundle, init.key_at, init.key_bt, init.session,
        EncryptionScheme::pauli_type(), Variant::A, TestMode::Swap, rng);
    rejects += materials.verdict ? 0 : 1;
  }
  expect_within_3sigma(rejects, shots, 0.5, "swap-mode rejection");
}

TEST(TrentVerify, MalformedBundleThrows) {
  Rng rng(17);
  InitResult init = initialize(1, rng);
  const SignaturePair pair =
      sign(MessageSpec::random_unknown(), init.key_at, init.session,
           EncryptionScheme::pauli_type(), rng);
  TransmissionBundle bundle =
      bob_prepare(pair, init.key_bt, init.session, rng);
  bundle.m_b_cipher.push_back(0);
  EXPECT_THROW(
      trent_verify(bundle, init.key_at, init.key_bt, init.session,
                   EncryptionScheme::pauli_type(), Variant::A,
                   TestMode::Projective, rng),
      std::invalid_argument);
}

// ---------- recovery ----------

TEST(BobRecover, HonestRunRecoversExactly) {
  Rng rng(18);
  InitResult init = initialize(2, rng);
  const SignaturePair pair =
      sign(MessageSpec::random_unknown(), init.key_at, init.session,
           EncryptionScheme::pauli_type(), rng);
  const StateVector reference = pair.message;
  const TransmissionBundle bundle =
      bob_prepare(pair, init.key_bt, init.session, rng);
  const ReturnedMaterials materials = trent_verify(
      bundle, init.key_at, init.key_bt, init.session,
      EncryptionScheme::pauli_type(), Variant::A, TestMode::Projective, rng);
  ASSERT_TRUE(materials.verdict);
  const VerificationResult result = bob_recover(
      materials, init.session, reference, TestMode::Projective, rng);
  EXPECT_TRUE(result.accepted);
  EXPECT_TRUE(result.trent_test_passed);
  EXPECT_TRUE(result.bob_test_passed);
  EXPECT_NEAR(result.recovered_fidelity, 1.0, 1e-9);
  EXPECT_EQ(init.session.phase, SessionPhase::Consumed);
}

TEST(BobRecover, RejectedVerdictThrows) {
  Rng rng(19);
  InitResult init = initialize(1, rng);
  const SignaturePair pair =
      sign(MessageSpec::random_unknown(), init.key_at, init.session,
           EncryptionScheme::pauli_type(), rng);
  const StateVector reference = pair.message;
  bob_prepare(pair, init.key_bt, init.session, rng);
  ReturnedMaterials fake;
  fake.verdict = false;
  EXPECT_THROW(bob_recover(fake, init.session, reference,
                           TestMode::Projective, rng),
               std::logic_error);
}

// ---------- full pipeline ----------

TEST(HonestSession, AcceptsAcrossConfigurations) {
  Rng rng(20);
  for (Variant variant : {Variant::A, Variant::B}) {
    for (TestMode mode : {TestMode::Projective, TestMode::Swap}) {
      const VerificationResult a =
          run_honest_session(4, EncryptionScheme::pauli_type(), variant, mode, rng);
      EXPECT_TRUE(a.accepted);
      EXPECT_NEAR(a.recovered_fidelity, 1.0, 1e-9);
      const VerificationResult b =
          run_honest_session(4, EncryptionScheme::ih_type(), variant, mode, rng);
      EXPECT_TRUE(b.accepted);
      EXPECT_NEAR(b.recovered_fidelity, 1.0, 1e-9);
    }
  }
}

TEST(HonestSession, TenThousandTrialsAllAccept) {
  Rng rng(21);
  for (int i = 0; i < 10000; ++i) {
    const VerificationResult r = run_honest_session(
        1, EncryptionScheme::pauli_type(), Variant::A, TestMode::Projective, rng);
    ASSERT_TRUE(r.accepted);
    ASSERT_NEAR(r.recovered_fidelity, 1.0, 1e-9);
  }
}

TEST(HonestSession, DeterministicUnderFixedSeed) {
  Transcript t1, t2;
  Rng r1(99), r2(99);
  const VerificationResult a = run_honest_session(
      3, EncryptionScheme::ih_type(), Variant::B, TestMode::Swap, r1, &t1);
  const VerificationResult b = run_honest_session(
      3, EncryptionScheme::ih_type(), Variant::B, TestMode::Swap, r2, &t2);
  EXPECT_EQ(a.accepted, b.accepted);
  EXPECT_EQ(a.recovered_fidelity, b.recovered_fidelity);
  EXPECT_EQ(t1.lines, t2.lines);
  EXPECT_FALSE(t1.lines.empty());
}

TEST(Transcript, RecordsPhaseEventsInOrder) {
  Transcript t;
  Rng rng(23);
  run_honest_session(1, EncryptionScheme::pauli_type(), Variant::B,
                     TestMode::Projective, rng, &t);
  ASSERT_GE(t.lines.size(), 5u);
  EXPECT_EQ(t.lines[0].rfind("init", 0), 0u);
  EXPECT_EQ(t.lines[1].rfind("sign", 0), 0u);
  const std::string all = t.str();
  EXPECT_NE(all.find("transport"), std::string::npos);
  EXPECT_NE(all.find("verify"), std::string::npos);
  EXPECT_NE(all.find("recover"), std::string::npos);
  EXPECT_NE(all.find("verdict=accept"), std::string::npos);
}
