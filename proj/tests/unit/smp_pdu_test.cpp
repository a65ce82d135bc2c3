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

#include "scosim/smp/pdu.hpp"

namespace scosim::smp {
namespace {

TEST(SmpPduTest, FeatureExchangeRoundTrip) {
  FeatureExchange body;
  body.features = {IoCapability::kKeyboardDisplay, true, true, true, false};
  body.initiator_key_dist = kKeyDistIdKey;
  body.responder_key_dist = kKeyDistIdKey;
  Pdu pdu = make_pairing_request(body);
  auto wire = pdu.encode();
  ASSERT_EQ(wire.size(), 7u);
  EXPECT_EQ(wire[0], 0x01);
  auto decoded = Pdu::decode(wire);
  ASSERT_TRUE(decoded);
  auto parsed = parse_feature_exchange(*decoded);
  ASSERT_TRUE(parsed);
  EXPECT_EQ(parsed->features, body.features);
  EXPECT_EQ(parsed->initiator_key_dist, kKeyDistIdKey);
}

TEST(SmpPduTest, ReservedAuthReqBitsIgnored) {
  FeatureExchange body;
  body.features = {IoCapability::kDisplayYesNo, true};
  Pdu pdu = make_pairing_response(body);
  pdu.payload[2] |= 0x80;
  auto parsed = parse_feature_exchange(pdu);
  ASSERT_TRUE(parsed);
  EXPECT_EQ(parsed->features, body.features);
}

TEST(SmpPduTest, RejectsMalformed) {
  EXPECT_FALSE(Pdu::decode(Bytes{}));
  EXPECT_FALSE(Pdu::decode(Bytes{0x7F}));
  EXPECT_FALSE(parse_feature_exchange(Pdu{Opcode::kPairingRequest, {1, 2}}));
  EXPECT_FALSE(parse_feature_exchange(
      Pdu{Opcode::kPairingRequest, {0x09, 0, 0, 16, 0, 0}}));
  EXPECT_FALSE(parse_public_key(Pdu{Opcode::kPairingPublicKey, {1}}));
}

TEST(SmpPduTest, FailedReasonUsesWireValues) {
  Pdu pdu = make_failed(SecurityError::kPairingAuthFail);
  EXPECT_EQ(pdu.encode(), (Bytes{0x05, 0x04}));
  EXPECT_EQ(parse_failed(pdu), SecurityError::kPairingAuthFail);
  EXPECT_EQ(make_failed(SecurityError::kAuthenticationRequirements).payload,
            Bytes{0x03});
  EXPECT_EQ(parse_failed(Pdu{Opcode::kPairingFailed, {0x99}}),
            SecurityError::kPairingAuthFail);
}

TEST(SmpPduTest, IdentityAddressRoundTrip) {
  auto addr = DeviceAddress::public_identity(0xA1B2C3D4E5F6);
  auto parsed = parse_identity_address(make_identity_address_information(addr));
  ASSERT_TRUE(parsed);
  EXPECT_EQ(*parsed, addr);
}

TEST(SmpPduTest, DescribeIsReadable) {
  FeatureExchange body;
  body.features = {IoCapability::kNoInputNoOutput, false};
  EXPECT_EQ(describe(make_pairing_request(body)),
            "PairingRequest io=NoInputNoOutput mitm=0 sc=1 oob=0 idist=0 "
            "rdist=0");
  EXPECT_EQ(describe(make_failed(SecurityError::kAuthenticationRequirements)),
            "PairingFailed reason=AuthenticationRequirements");
}

}  // namespace
}  // namespace scosim::smp
