/******************************************************************************
 *
 *  Copyright 2026 The scosim Authors
 *
 *  Licensed under the Apache License, Version 2.0 (the "License");
 *  you may not use this file except in compliance with the License.
 *  You may obtain a copy of the License at:
 *
 *  http://www.apache.org/licenses/LICENSE-2.0
 *
 *  Unless required by applicable law or agreed to in writing, software
 *  distributed under the License is distributed on an "AS IS" BASIS,
 *  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 *  See the License for the specific language governing permissions and
 *  limitations under the License.
 *
 ******************************************************************************/

#include <gtest/gtest.h>

#include <algorithm>

#include "scosim/smp/session.hpp"
#include "scosim/smp/user_agent.hpp"
#include "smp_loopback.hpp"

namespace scosim::smp {
namespace {

using testing::SmpLoopback;

SessionConfig config(IoCapability io, bool mitm) {
  SessionConfig c;
  c.features = PairingFeatures{io, mitm};
  return c;
}

LocalIdentity mobile_identity() {
  return LocalIdentity{
      crypto::Irk{0x11, 0x22, 0x33, 0x44, 0x55, 0x66, 0x77, 0x88, 0x99, 0xAA,
                  0xBB, 0xCC, 0xDD, 0xEE, 0xFF, 0x00},
      DeviceAddress::public_identity(0x00A0B0C0D0E0)};
}

bool sent(const PairingSession& s, Opcode op) {
  return std::any_of(s.log().begin(), s.log().end(), [&](const LoggedPdu& l) {
    return l.outgoing && l.pdu.opcode == op;
  });
}

struct MethodCase {
  PairingMethod method;
  SessionConfig initiator;
  SessionConfig responder;
};

std::vector<MethodCase> method_cases() {
  std::vector<MethodCase> out;
  out.push_back({PairingMethod::kJustWorks,
                 config(IoCapability::kKeyboardDisplay, false),
                 config(IoCapability::kNoInputNoOutput, false)});
  out.push_back({PairingMethod::kNumericComparison,
                 config(IoCapability::kKeyboardDisplay, true),
                 config(IoCapability::kDisplayYesNo, true)});
  out.push_back({PairingMethod::kPasskeyEntry,
                 config(IoCapability::kKeyboardDisplay, true),
                 config(IoCapability::kKeyboardOnly, true)});
  MethodCase oob{PairingMethod::kOutOfBand,
                 config(IoCapability::kNoInputNoOutput, true),
                 config(IoCapability::kNoInputNoOutput, false)};
  oob.initiator.features.oob = oob.responder.features.oob = true;
  oob.initiator.oob_secret = oob.responder.oob_secret =
      Key128{9, 8, 7, 6, 5, 4, 3, 2, 1};
  out.push_back(oob);
  return out;
}

TEST(PairingSessionTest, HonestPairingUnderEachMethod) {
  for (const auto& c : method_cases()) {
    for (uint64_t seed = 1; seed <= 10; ++seed) {
      SessionConfig init = c.initiator;
      init.local_identity = mobile_identity();
      SmpLoopback lb(init, c.responder, seed);
      lb.run_honest();
      SCOPED_TRACE(std::string(to_string(c.method)));
      ASSERT_EQ(lb.initiator().state(), State::kKeysDistributed);
      ASSERT_EQ(lb.responder().state(), State::kKeysDistributed);
      EXPECT_EQ(lb.initiator().negotiated(), c.method);
      EXPECT_EQ(lb.responder().negotiated(), c.method);
      ASSERT_TRUE(lb.initiator().keys() && lb.responder().keys());
      EXPECT_EQ(*lb.initiator().keys(), *lb.responder().keys());
      EXPECT_EQ(lb.initiator().keys()->authenticated,
                is_authenticated(c.method));
      // Only the initiator had an identity to hand out.
      ASSERT_TRUE(lb.responder().peer_identity());
      EXPECT_EQ(lb.responder().peer_identity()->irk, mobile_identity().irk);
      EXPECT_EQ(lb.responder().peer_identity()->identity,
                mobile_identity().identity);
      EXPECT_FALSE(lb.initiator().peer_identity());
    }
  }
}

TEST(PairingSessionTest, StatesAdvanceInOrder) {
  for (const auto& c : method_cases()) {
    SmpLoopback lb(c.initiator, c.responder, 3);
    lb.run_honest();
    for (const auto* side : {&lb.initiator_side(), &lb.responder_side()}) {
      const auto& states = side->states;
      ASSERT_FALSE(states.empty());
      EXPECT_TRUE(std::is_sorted(states.begin(), states.end()));
      EXPECT_EQ(states.back(), State::kKeysDistributed);
    }
  }
}

TEST(PairingSessionTest, ResponderIdentityIsDistributedFirst) {
  SessionConfig init = config(IoCapability::kKeyboardDisplay, false);
  SessionConfig resp = config(IoCapability::kNoInputNoOutput, false);
  init.local_identity = mobile_identity();
  resp.local_identity =
      LocalIdentity{crypto::Irk{1}, DeviceAddress::public_identity(0xC0FFEE)};
  SmpLoopback lb(init, resp, 4);
  lb.run_honest();
  ASSERT_EQ(lb.initiator().state(), State::kKeysDistributed);
  ASSERT_TRUE(lb.initiator().peer_identity());
  EXPECT_EQ(lb.initiator().peer_identity()->irk, crypto::Irk{1});

  auto first_identity = [](const PairingSession& s) {
    for (size_t i = 0; i < s.log().size(); ++i) {
      if (s.log()[i].pdu.opcode == Opcode::kIdentityInformation) return i;
    }
    return s.log().size();
  };
  // In the initiator's log the incoming identity precedes the outgoing one.
  const auto& log = lb.initiator().log();
  size_t i = first_identity(lb.initiator());
  ASSERT_LT(i, log.size());
  EXPECT_FALSE(log[i].outgoing);
}

TEST(PairingSessionTest, NoIdentityBeforeLinkEncrypted) {
  SessionConfig init = config(IoCapability::kKeyboardDisplay, false);
  init.local_identity = mobile_identity();
  SmpLoopback lb(init, config(IoCapability::kNoInputNoOutput, false), 5);
  lb.start();
  EXPECT_EQ(lb.initiator().state(), State::kAuth2Done);
  EXPECT_FALSE(sent(lb.initiator(), Opcode::kIdentityInformation));
  lb.encrypt_link();
  EXPECT_TRUE(sent(lb.initiator(), Opcode::kIdentityInformation));
}

TEST(PairingSessionTest, NegotiatedNeverChanges) {
  SmpLoopback lb(config(IoCapability::kKeyboardDisplay, true),
                 config(IoCapability::kDisplayYesNo, true), 6);
  lb.start();
  auto method = lb.initiator().negotiated();
  ASSERT_TRUE(method);
  lb.run_honest();
  EXPECT_EQ(lb.initiator().negotiated(), method);
  EXPECT_EQ(lb.responder().negotiated(), method);
}

TEST(PairingSessionTest, InfeasibleMitmRequirementFails) {
  SmpLoopback lb(config(IoCapability::kDisplayOnly, true),
                 config(IoCapability::kNoInputNoOutput, false), 7);
  lb.start();
  EXPECT_EQ(lb.responder().failure(),
            SecurityError::kAuthenticationRequirements);
  EXPECT_EQ(lb.initiator().failure(),
            SecurityError::kAuthenticationRequirements);
  EXPECT_FALSE(sent(lb.initiator(), Opcode::kPairingPublicKey));
}

TEST(PairingSessionTest, PermissiveStackFallsBackToJustWorks) {
  SessionConfig attacker = config(IoCapability::kNoInputNoOutput, false);
  attacker.permissive = true;
  SmpLoopback lb(config(IoCapability::kKeyboardDisplay, false), attacker, 8);
  lb.run_honest();
  EXPECT_EQ(lb.responder().negotiated(), PairingMethod::kJustWorks);
  EXPECT_EQ(lb.initiator().state(), State::kKeysDistributed);
}

TEST(ScOnlyGateTest, CorrectPolicyNeverReachesPublicKeysViaJustWorks) {
  ScOnlyPolicy policy{true, ScOnlyEnforcement::kCorrect};
  for (IoCapability a : kAllIoCapabilities) {
    for (IoCapability b : kAllIoCapabilities) {
      for (int m = 0; m < 4; ++m) {
        SessionConfig init = config(a, (m & 1) != 0);
        SessionConfig resp = config(b, (m & 2) != 0);
        resp.sc_only = policy;
        SmpLoopback lb(init, resp, 100 + m);
        lb.run_honest();
        auto expected = method_for(init.features, resp.features);
        const bool reached =
            std::find(lb.responder_side().states.begin(),
                      lb.responder_side().states.end(),
                      State::kPublicKeysExchanged) !=
            lb.responder_side().states.end();
        if (!expected.ok() || *expected == PairingMethod::kJustWorks) {
          EXPECT_FALSE(reached);
          EXPECT_EQ(lb.responder().failure(),
                    SecurityError::kAuthenticationRequirements);
        } else {
          EXPECT_TRUE(reached);
          EXPECT_EQ(lb.responder().state(), State::kKeysDistributed);
        }
      }
    }
  }
}

TEST(ScOnlyGateTest, TiFlawedPolicyLetsJustWorksThrough) {
  SessionConfig resp = config(IoCapability::kDisplayYesNo, false);
  resp.sc_only = {true, ScOnlyEnforcement::kTiFlawedScBitOnly};
  SmpLoopback lb(config(IoCapability::kNoInputNoOutput, false), resp, 9);
  lb.run_honest();
  EXPECT_EQ(lb.responder().negotiated(), PairingMethod::kJustWorks);
  EXPECT_EQ(lb.responder().state(), State::kKeysDistributed);
  EXPECT_FALSE(lb.responder().keys()->authenticated);
}

TEST(ScOnlyGateTest, GateFunction) {
  const PairingFeatures sc_on{IoCapability::kNoInputNoOutput, false};
  PairingFeatures sc_off = sc_on;
  sc_off.sc = false;
  const Result<PairingMethod> jw = PairingMethod::kJustWorks;
  const Result<PairingMethod> nc = PairingMethod::kNumericComparison;
  ScOnlyPolicy off;
  ScOnlyPolicy correct{true, ScOnlyEnforcement::kCorrect};
  ScOnlyPolicy ti{true, ScOnlyEnforcement::kTiFlawedScBitOnly};
  EXPECT_FALSE(sc_only_gate(off, sc_on, jw));
  EXPECT_TRUE(sc_only_gate(correct, sc_on, jw));
  EXPECT_FALSE(sc_only_gate(correct, sc_on, nc));
  EXPECT_FALSE(sc_only_gate(ti, sc_on, jw));
  EXPECT_TRUE(sc_only_gate(ti, sc_off, jw));
}

TEST(MethodGuardTest, MismatchAbortsBeforePublicKey) {
  SessionConfig init = config(IoCapability::kKeyboardDisplay, true);
  init.local_identity = mobile_identity();
  init.method_guard = [](const Result<PairingMethod>& m)
      -> std::optional<SecurityError> {
    if (!m.ok() || *m != PairingMethod::kNumericComparison) {
      return SecurityError::kPairingAuthFail;
    }
    return std::nullopt;
  };
  SessionConfig fake = config(IoCapability::kNoInputNoOutput, false);
  fake.permissive = true;
  SmpLoopback lb(init, fake, 10);
  lb.run_honest();
  EXPECT_EQ(lb.initiator().failure(), SecurityError::kPairingAuthFail);
  EXPECT_EQ(lb.responder().failure(), SecurityError::kPairingAuthFail);
  EXPECT_FALSE(sent(lb.initiator(), Opcode::kPairingPublicKey));
  EXPECT_FALSE(sent(lb.initiator(), Opcode::kIdentityInformation));
  EXPECT_FALSE(lb.responder().peer_identity());
}

TEST(NumericComparisonTest, UserRejectionFails) {
  SmpLoopback lb(config(IoCapability::kKeyboardDisplay, true),
                 config(IoCapability::kDisplayYesNo, true), 11);
  lb.start();
  ASSERT_TRUE(lb.initiator().awaiting_confirmation());
  ASSERT_TRUE(lb.responder().awaiting_confirmation());
  EXPECT_EQ(lb.initiator().displayed_value(), lb.responder().displayed_value());
  lb.responder().on_user_confirm(false);
  lb.pump();
  EXPECT_EQ(lb.responder().state(), State::kFailed);
  EXPECT_EQ(lb.initiator().state(), State::kFailed);
}

TEST(NumericComparisonTest, ConfirmOrderDoesNotMatter) {
  SmpLoopback lb(config(IoCapability::kKeyboardDisplay, true),
                 config(IoCapability::kDisplayYesNo, true), 12);
  lb.start();
  lb.initiator().on_user_confirm(true);
  lb.pump();
  EXPECT_EQ(lb.responder().state(), State::kPublicKeysExchanged);
  lb.responder().on_user_confirm(true);
  lb.pump();
  EXPECT_EQ(lb.initiator().state(), State::kAuth2Done);
  EXPECT_EQ(lb.responder().state(), State::kAuth2Done);
}

// Victim A <-> attacker leg 1, attacker leg 2 <-> victim B. Honest
// comparators look at both victim screens.
TEST(NumericComparisonTest, MitmDetectedByComparators) {
  int defeated = 0;
  for (uint64_t seed = 0; seed < 1000; ++seed) {
    SessionConfig attacker = config(IoCapability::kDisplayYesNo, true);
    SmpLoopback leg1(config(IoCapability::kKeyboardDisplay, true), attacker,
                     2 * seed + 1);
    SmpLoopback leg2(attacker, config(IoCapability::kKeyboardDisplay, true),
                     2 * seed + 2);
    leg1.start();
    leg2.start();
    auto& a = leg1.initiator();
    auto& b = leg2.responder();
    ASSERT_TRUE(a.awaiting_confirmation() && b.awaiting_confirmation());
    const bool same = a.displayed_value() == b.displayed_value();
    leg1.responder().on_user_confirm(true);
    leg2.initiator().on_user_confirm(true);
    a.on_user_confirm(same);
    b.on_user_confirm(same);
    leg1.pump();
    leg2.pump();
    if (a.state() == State::kFailed && b.state() == State::kFailed) ++defeated;
  }
  EXPECT_GE(defeated, 998);
}

TEST(PasskeyEntryTest, AttackerWithoutPasskeyFails) {
  int rejected = 0;
  for (uint64_t seed = 0; seed < 1000; ++seed) {
    // Victim displays; attacker must type a passkey it never saw.
    SmpLoopback lb(config(IoCapability::kKeyboardDisplay, true),
                   config(IoCapability::kKeyboardOnly, true), 40000 + seed);
    lb.start();
    ASSERT_TRUE(lb.initiator().displayed_value());
    ASSERT_TRUE(lb.responder().awaiting_passkey());
    const auto guess = static_cast<uint32_t>(
        lb.rng().uniform(0, crypto::kMaxPasskey));
    lb.responder().on_passkey_entered(guess);
    lb.pump();
    if (lb.initiator().state() == State::kFailed &&
        lb.initiator().failure() == SecurityError::kPairingAuthFail) {
      ++rejected;
    }
  }
  EXPECT_EQ(rejected, 1000);
}

TEST(PasskeyEntryTest, RelayedPasskeySucceedsForAttacker) {
  SmpLoopback lb(config(IoCapability::kKeyboardDisplay, true),
                 config(IoCapability::kKeyboardOnly, true), 13);
  lb.start();
  // The victim types the passkey on a keyboard the attacker listens to.
  const uint32_t typed = *lb.initiator().displayed_value();
  UserAgent attacker;
  attacker.behavior = UserBehavior::kAttackerControlled;
  attacker.passkey_source = [typed] { return typed; };
  lb.responder().on_passkey_entered(*passkey_decision(attacker));
  lb.pump();
  lb.encrypt_link();
  EXPECT_EQ(lb.initiator().state(), State::kKeysDistributed);
  EXPECT_TRUE(lb.initiator().keys()->authenticated);
}

TEST(OutOfBandTest, MismatchedSecretsFail) {
  auto c = method_cases()[3];
  c.responder.oob_secret = Key128{1};
  SmpLoopback lb(c.initiator, c.responder, 14);
  lb.run_honest();
  EXPECT_EQ(lb.responder().failure(), SecurityError::kPairingAuthFail);
}

TEST(TranscriptTest, TamperedResponseFailsDhKeyCheck) {
  int rejected = 0;
  for (uint64_t seed = 0; seed < 100; ++seed) {
    SmpLoopback lb(config(IoCapability::kKeyboardDisplay, false),
                   config(IoCapability::kNoInputNoOutput, false), 500 + seed);
    // Flip a reserved AuthReq bit: features parse the same, the logged
    // bytes differ.
    lb.tamper = [](int to, Pdu& pdu) {
      if (to == 0 && pdu.opcode == Opcode::kPairingResponse) {
        pdu.payload[2] ^= 0x80;
      }
    };
    lb.start();
    const auto& states = lb.initiator_side().states;
    const bool passed_stage1 =
        std::find(states.begin(), states.end(), State::kAuth1Done) !=
        states.end();
    if (passed_stage1 && lb.responder().failure() ==
                             SecurityError::kPairingAuthFail) {
      ++rejected;
    }
  }
  EXPECT_EQ(rejected, 100);
}

TEST(PairingSessionTest, UnexpectedPduFails) {
  SmpLoopback lb(config(IoCapability::kKeyboardDisplay, false),
                 config(IoCapability::kNoInputNoOutput, false), 15);
  lb.responder().on_pdu(make_random(crypto::Nonce{}));
  EXPECT_EQ(lb.responder().state(), State::kFailed);
}

TEST(PairingSessionTest, SecurityRequestIsNotASessionMessage) {
  SmpLoopback lb(config(IoCapability::kKeyboardDisplay, false),
                 config(IoCapability::kNoInputNoOutput, false), 16);
  lb.initiator().on_pdu(make_security_request(PairingFeatures{}));
  EXPECT_EQ(lb.initiator().state(), State::kIdle);
  EXPECT_TRUE(lb.initiator().log().empty());
}

TEST(UserAgentTest, Decisions) {
  UserAgent absent;
  EXPECT_FALSE(comparison_decision(absent, 5));
  EXPECT_FALSE(passkey_decision(absent));

  UserAgent honest;
  honest.behavior = UserBehavior::kHonestComparator;
  EXPECT_EQ(comparison_decision(honest, 5), false);
  honest.counterpart_display = [] { return std::optional<uint32_t>(5); };
  EXPECT_EQ(comparison_decision(honest, 5), true);
  EXPECT_EQ(comparison_decision(honest, 6), false);
  EXPECT_EQ(passkey_decision(honest), 5u);

  UserAgent attacker;
  attacker.behavior = UserBehavior::kAttackerControlled;
  EXPECT_EQ(comparison_decision(attacker, 1), true);
  EXPECT_FALSE(passkey_decision(attacker));
}

}  // namespace
}  // namespace scosim::smp
