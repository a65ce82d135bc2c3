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

#include "scosim/att/profile.hpp"
#include "scosim/att/server.hpp"

namespace scosim::att {
namespace {

const LinkSecurityState kLinks[] = {
    LinkSecurityState::plaintext(), LinkSecurityState::encrypted(false),
    LinkSecurityState::encrypted(true)};

// Rows: Open, Encrypted, Authenticated, Authorized. Columns: plaintext,
// encrypted with an unauthenticated key, encrypted with an authenticated key.
constexpr bool kAllowed[4][3] = {
    {true, true, true},
    {false, true, true},
    {false, false, true},
    {false, false, false},
};

TEST(CheckPermissionTest, MatchesTableExhaustively) {
  for (size_t p = 0; p < kAllPermissions.size(); ++p) {
    for (size_t l = 0; l < 3; ++l) {
      auto result = check_permission(kAllPermissions[p], kLinks[l]);
      EXPECT_EQ(!result.has_value(), kAllowed[p][l])
          << to_string(kAllPermissions[p]) << " link " << l;
      if (result) {
        EXPECT_EQ(*result, SecurityError::kInsufficientAuthentication);
      }
    }
  }
}

TEST(CheckPermissionTest, Monotone) {
  for (Permission p : kAllPermissions) {
    for (size_t lo = 0; lo < 3; ++lo) {
      for (size_t hi = lo; hi < 3; ++hi) {
        if (!check_permission(p, kLinks[lo])) {
          EXPECT_FALSE(check_permission(p, kLinks[hi]));
        }
      }
    }
  }
}

TEST(LinkSecurityStateTest, AuthenticatedImpliesEncrypted) {
  for (const auto& l : kLinks) {
    EXPECT_TRUE(!l.key_authenticated() || l.is_encrypted());
  }
}

ServiceSpec sample_service() {
  ServiceSpec s;
  s.uuid = Uuid::from16(0x1810);
  s.characteristics.push_back(
      {Uuid::from16(0x2A35), Permission::kOpen, to_bytes("120/80"), true});
  s.characteristics.push_back(
      {Uuid::from16(0x2A49), Permission::kEncryptedReadWrite, {0x01}, false});
  return s;
}

TEST(AttributeServerTest, HandlesAreSequentialAndGrouped) {
  ServiceSpec second;
  second.uuid = Uuid::from16(0x1812);
  second.kind = ServiceKind::kSecondary;
  second.characteristics.push_back(
      {Uuid::from16(0x2A4D), Permission::kEncryptedReadWrite, {}, true});
  AttributeServer server({sample_service(), second});
  const auto& attrs = server.attributes();
  for (size_t i = 0; i < attrs.size(); ++i) {
    EXPECT_EQ(attrs[i].handle, i + 1);
  }
  for (const auto& a : attrs) {
    int owners = 0;
    for (const auto& s : server.services()) owners += s.contains(a.handle);
    EXPECT_EQ(owners, 1) << a.handle;
  }
  // Declaration, reading, its descriptor, feature.
  EXPECT_EQ(server.services()[0].first_handle, 1);
  EXPECT_EQ(server.services()[0].last_handle, 4);
  EXPECT_EQ(server.find_by_uuid(Uuid::from16(0x2A35)), 2);
  EXPECT_EQ(server.cccd_for(2), 3);
  EXPECT_EQ(server.find_by_uuid(Uuid::from16(0x2A49)), 4);
}

TEST(AttributeServerTest, ReadWriteRoundTrip) {
  AttributeServer server({sample_service()});
  const auto plain = LinkSecurityState::plaintext();
  EXPECT_EQ(std::get<Bytes>(server.read(2, plain)), to_bytes("120/80"));
  EXPECT_FALSE(server.write(2, to_bytes("130/85"), plain));
  EXPECT_EQ(std::get<Bytes>(server.read(2, plain)), to_bytes("130/85"));
  EXPECT_EQ(std::get<ErrorCode>(server.read(99, plain)),
            ErrorCode::kInvalidHandle);
  EXPECT_EQ(server.write(0, {}, plain), ErrorCode::kInvalidHandle);
}

TEST(AttributeServerTest, DenialIsInsufficientAuthentication) {
  AttributeServer server({sample_service()});
  auto rsp = server.handle_request(make_read_request(4),
                                   LinkSecurityState::plaintext());
  ASSERT_TRUE(rsp);
  auto err = parse_error_response(*rsp);
  ASSERT_TRUE(err);
  EXPECT_EQ(err->code, ErrorCode::kInsufficientAuthentication);
  EXPECT_EQ(static_cast<uint8_t>(err->code), 0x05);
  EXPECT_EQ(err->handle, 4);
  EXPECT_EQ(rsp->encode(), (Bytes{0x01, 0x0A, 0x04, 0x00, 0x05}));

  rsp = server.handle_request(make_read_request(4),
                              LinkSecurityState::encrypted(false));
  ASSERT_TRUE(rsp);
  EXPECT_EQ(rsp->opcode, Opcode::kReadResponse);
}

TEST(AttributeServerTest, ErrorIffPermissionDenies) {
  for (Permission p : kAllPermissions) {
    ServiceSpec s;
    s.uuid = Uuid::from16(0x1800);
    s.characteristics.push_back({Uuid::from16(0x2A00), p, {0x42}, false});
    AttributeServer server({s});
    for (const auto& link : kLinks) {
      auto rsp = server.handle_request(make_read_request(2), link);
      ASSERT_TRUE(rsp);
      const bool got_05 =
          rsp->opcode == Opcode::kErrorResponse &&
          parse_error_response(*rsp)->code ==
              ErrorCode::kInsufficientAuthentication;
      EXPECT_EQ(got_05, check_permission(p, link).has_value());
    }
  }
}

TEST(AttributeServerTest, NotifyNeedsSubscription) {
  AttributeServer server({sample_service()});
  EXPECT_FALSE(server.notify(2, to_bytes("118/79")));
  EXPECT_EQ(std::get<Bytes>(server.read(2, LinkSecurityState::plaintext())),
            to_bytes("118/79"));
  auto rsp = server.handle_request(make_write_request(3, Bytes{0x01, 0x00}),
                                   LinkSecurityState::plaintext());
  ASSERT_EQ(rsp->opcode, Opcode::kWriteResponse);
  auto ntf = server.notify(2, to_bytes("121/81"));
  ASSERT_TRUE(ntf);
  auto hv = parse_handle_value(*ntf);
  EXPECT_EQ(hv->handle, 2);
  EXPECT_EQ(hv->value, to_bytes("121/81"));
  server.reset_subscriptions();
  EXPECT_FALSE(server.notify(2, to_bytes("1")));
}

TEST(AttributeServerTest, SubscriptionIsGatedLikeTheValue) {
  ServiceSpec s;
  s.uuid = Uuid::from16(0x1812);
  s.characteristics.push_back(
      {Uuid::from16(0x2A4D), Permission::kEncryptedReadWrite, {}, true});
  AttributeServer server({s});
  auto rsp = server.handle_request(make_write_request(3, Bytes{0x01, 0x00}),
                                   LinkSecurityState::plaintext());
  EXPECT_EQ(parse_error_response(*rsp)->code,
            ErrorCode::kInsufficientAuthentication);
  EXPECT_FALSE(server.subscribed(2));
}

TEST(AttributeServerTest, FindInformationListsEveryHandle) {
  AttributeServer server({sample_service()});
  auto rsp = server.handle_request(make_find_information_request(1, 0xFFFF),
                                   LinkSecurityState::plaintext());
  auto entries = parse_find_information_response(*rsp);
  ASSERT_TRUE(entries);
  ASSERT_EQ(entries->size(), server.attributes().size());
  EXPECT_EQ((*entries)[1].uuid, Uuid::from16(0x2A35));
  EXPECT_EQ((*entries)[2].uuid, kCccdUuid);
}

TEST(AttPduTest, DecodeRejectsUnknownOpcode) {
  EXPECT_FALSE(Pdu::decode(Bytes{}));
  EXPECT_FALSE(Pdu::decode(Bytes{0x7E, 0x00}));
  auto p = Pdu::decode(Bytes{0x0A, 0x02, 0x00});
  ASSERT_TRUE(p);
  EXPECT_EQ(parse_read_request(*p), 2);
  EXPECT_EQ(describe(*p), "ReadReq handle=2");
}

TEST(UuidTest, ParseAndFormat) {
  EXPECT_EQ(Uuid::parse("180D"), Uuid::from16(0x180D));
  EXPECT_EQ(Uuid::parse("0x180d"), Uuid::from16(0x180D));
  EXPECT_EQ(Uuid::parse("0000180D-0000-1000-8000-00805F9B34FB"),
            Uuid::from16(0x180D));
  EXPECT_EQ(Uuid::from16(0x2A35).to_string(), "2A35");
  auto custom = Uuid::parse("6E400001-B5A3-F393-E0A9-E50E24DCCA9E");
  ASSERT_TRUE(custom);
  EXPECT_EQ(custom->to_string(), "6E400001-B5A3-F393-E0A9-E50E24DCCA9E");
  EXPECT_FALSE(Uuid::parse("18"));
  EXPECT_FALSE(Uuid::parse("6E400001xB5A3-F393-E0A9-E50E24DCCA9E"));
}

TEST(ProfileTest, ParsesServices) {
  auto specs = parse_att_profile(R"({
    "name": "ignored",
    "services": [{
      "uuid": "1810",
      "characteristics": [
        {"uuid": "2A35", "permission": "Open", "notify": true,
         "value": "sys=120"},
        {"uuid": "2A49", "permission": "AuthenticatedReadWrite",
         "value_hex": "0102"}
      ]}]})");
  ASSERT_EQ(specs.size(), 1u);
  ASSERT_EQ(specs[0].characteristics.size(), 2u);
  EXPECT_TRUE(specs[0].characteristics[0].notify);
  EXPECT_EQ(specs[0].characteristics[0].value, to_bytes("sys=120"));
  EXPECT_EQ(specs[0].characteristics[1].permission,
            Permission::kAuthenticatedReadWrite);
  EXPECT_EQ(specs[0].characteristics[1].value, (Bytes{0x01, 0x02}));

  auto again = services_from_json(services_to_json(specs));
  EXPECT_EQ(again[0].characteristics[1].value, (Bytes{0x01, 0x02}));
}

TEST(ProfileTest, RejectsMalformed) {
  EXPECT_THROW(parse_att_profile("{"), ProfileError);
  EXPECT_THROW(parse_att_profile("{}"), ProfileError);
  EXPECT_THROW(parse_att_profile(R"({"services":[{"uuid":"zz"}]})"),
               ProfileError);
  EXPECT_THROW(
      parse_att_profile(
          R"({"services":[{"uuid":"1800","characteristics":[{"uuid":"2A00","permission":"Sometimes"}]}]})"),
      ProfileError);
}

TEST(ProfileTest, WithPermissionOpensEverything) {
  auto specs = with_permission({sample_service()}, Permission::kOpen);
  for (const auto& c : specs[0].characteristics) {
    EXPECT_EQ(c.permission, Permission::kOpen);
  }
}

}  // namespace
}  // namespace scosim::att
