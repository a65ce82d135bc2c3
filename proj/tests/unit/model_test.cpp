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

#include <set>

#include "method_table.hpp"
#include "scosim/model.hpp"

namespace scosim {
namespace {

TEST(MethodTableTest, MatchesFrozenTable) {
  auto rows = testing::load_method_table();
  ASSERT_EQ(rows.size(), 100u);
  std::set<std::tuple<int, bool, int, bool>> seen;
  for (const auto& row : rows) {
    seen.emplace(static_cast<int>(row.initiator.io), row.initiator.mitm,
                 static_cast<int>(row.responder.io), row.responder.mitm);
    EXPECT_EQ(testing::outcome_name(method_for(row.initiator, row.responder)),
              row.expected)
        << to_string(row.initiator.io) << " mitm=" << row.initiator.mitm
        << " x " << to_string(row.responder.io)
        << " mitm=" << row.responder.mitm;
  }
  EXPECT_EQ(seen.size(), 100u);
}

TEST(MethodTableTest, DocumentedExamples) {
  using IO = IoCapability;
  EXPECT_EQ(*method_for({IO::kNoInputNoOutput, false}, {IO::kDisplayYesNo, false}),
            PairingMethod::kJustWorks);
  EXPECT_EQ(*method_for({IO::kDisplayYesNo, true}, {IO::kDisplayYesNo, true}),
            PairingMethod::kNumericComparison);
  auto r = method_for({IO::kDisplayOnly, true}, {IO::kNoInputNoOutput, false});
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.error(), SecurityError::kAuthenticationRequirements);
  const PairingFeatures none{IO::kNoInputNoOutput, false};
  EXPECT_EQ(*method_for(none, none), PairingMethod::kJustWorks);
}

TEST(MethodTableTest, OobTakesPrecedenceAndScIsRequired) {
  for (IoCapability a : kAllIoCapabilities) {
    for (IoCapability b : kAllIoCapabilities) {
      PairingFeatures x{a, true, true, true, true};
      PairingFeatures y{b, false, true, true, true};
      EXPECT_EQ(*method_for(x, y), PairingMethod::kOutOfBand);
      y.sc = false;
      EXPECT_FALSE(method_for(x, y).ok());
    }
  }
}

TEST(MethodTableTest, SwappingRolesKeepsAuthenticatedProperty) {
  for (IoCapability a : kAllIoCapabilities) {
    for (IoCapability b : kAllIoCapabilities) {
      for (int m = 0; m < 4; ++m) {
        PairingFeatures x{a, (m & 1) != 0};
        PairingFeatures y{b, (m & 2) != 0};
        auto ab = method_for(x, y);
        auto ba = method_for(y, x);
        ASSERT_EQ(ab.ok(), ba.ok());
        if (ab.ok()) {
          EXPECT_EQ(is_authenticated(*ab), is_authenticated(*ba));
        }
      }
    }
  }
}

TEST(MethodTableTest, NumericComparisonNeedsTwoConfirmingDisplays) {
  for (IoCapability a : kAllIoCapabilities) {
    for (IoCapability b : kAllIoCapabilities) {
      auto r = method_for({a, true}, {b, true});
      if (r.ok() && *r == PairingMethod::kNumericComparison) {
        EXPECT_TRUE(can_confirm(a) && can_confirm(b));
      }
    }
  }
}

TEST(PasskeyRoleTest, ExactlyOneSideTypes) {
  for (IoCapability a : kAllIoCapabilities) {
    for (IoCapability b : kAllIoCapabilities) {
      auto r = method_for({a, true}, {b, true});
      if (!r.ok() || *r != PairingMethod::kPasskeyEntry) continue;
      PasskeyRole ra = passkey_role(a, b);
      PasskeyRole rb = passkey_role(b, a);
      EXPECT_NE(ra, rb) << to_string(a) << " x " << to_string(b);
      if (ra == PasskeyRole::kInputs) {
        EXPECT_TRUE(can_input(a));
      } else {
        EXPECT_TRUE(can_display(a));
      }
    }
  }
}

TEST(AuthenticatedTest, OnlyJustWorksIsUnauthenticated) {
  for (PairingMethod m : kAllPairingMethods) {
    EXPECT_EQ(is_authenticated(m), m != PairingMethod::kJustWorks);
  }
}

TEST(SecurityErrorTest, WireValues) {
  EXPECT_EQ(wire_value(SecurityError::kInsufficientAuthentication), 0x05);
  EXPECT_EQ(wire_value(SecurityError::kPinOrKeyMissing), 0x06);
  EXPECT_EQ(security_error_from_wire(0x05),
            SecurityError::kInsufficientAuthentication);
  EXPECT_EQ(security_error_from_wire(0x06), SecurityError::kPinOrKeyMissing);
  EXPECT_FALSE(security_error_from_wire(0x42));
  for (auto e : {SecurityError::kAuthenticationRequirements,
                 SecurityError::kPairingAuthFail,
                 SecurityError::kInsufficientAuthentication,
                 SecurityError::kPinOrKeyMissing}) {
    EXPECT_EQ(parse_security_error(to_string(e)), e);
    EXPECT_EQ(security_error_from_wire(wire_value(e)), e);
  }
}

TEST(DeviceAddressTest, ParseAndFormat) {
  auto pub = DeviceAddress::parse("C0:1D:CA:FE:00:01");
  ASSERT_TRUE(pub);
  EXPECT_FALSE(pub->is_rpa());
  EXPECT_EQ(pub->value(), 0xC01DCAFE0001u);
  EXPECT_EQ(pub->to_string(), "C0:1D:CA:FE:00:01");

  auto rpa = DeviceAddress::parse("5A:1B:2C:3D:4E:5F/rpa");
  ASSERT_TRUE(rpa);
  EXPECT_TRUE(rpa->is_rpa());
  EXPECT_EQ(rpa->to_string(), "5A:1B:2C:3D:4E:5F/rpa");

  EXPECT_FALSE(DeviceAddress::parse("C0:1D:CA:FE:00:01/rpa"));
  EXPECT_FALSE(DeviceAddress::parse("C0:1D:CA:FE:00"));
  EXPECT_FALSE(DeviceAddress::parse("G0:1D:CA:FE:00:01"));
}

TEST(DeviceAddressTest, RpaMarkerEnforced) {
  EXPECT_THROW(DeviceAddress::resolvable_private(0xC01DCAFE0001),
               std::invalid_argument);
  EXPECT_NO_THROW(DeviceAddress::resolvable_private(0x401DCAFE0001));
}

TEST(HexTest, RoundTripAndSeparators) {
  auto v = from_hex("de:ad be ef");
  ASSERT_TRUE(v);
  EXPECT_EQ(to_hex(*v), "deadbeef");
  EXPECT_FALSE(from_hex("abc"));
  EXPECT_FALSE(from_hex("zz"));
}

TEST(StrengthTest, Ordering) {
  EXPECT_GT(strength(PairingMethod::kNumericComparison),
            strength(PairingMethod::kPasskeyEntry));
  EXPECT_EQ(strength(PairingMethod::kPasskeyEntry),
            strength(PairingMethod::kOutOfBand));
  EXPECT_GT(strength(PairingMethod::kOutOfBand),
            strength(PairingMethod::kJustWorks));
}

}  // namespace
}  // namespace scosim
