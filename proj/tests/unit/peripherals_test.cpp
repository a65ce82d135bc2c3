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
#include "scosim/crypto.hpp"
#include "scosim/host/host.hpp"
#include "scosim/link/medium.hpp"
#include "scosim/peripherals/attackers.hpp"
#include "scosim/peripherals/device.hpp"
#include "scosim/peripherals/profile.hpp"

namespace scosim::peripherals {
namespace {

using link::kSecond;

const AppId kApp = "com.example.companion";

struct Bench {
  explicit Bench(const DeviceProfile& profile, uint64_t seed = 1)
      : scheduler(seed), medium(scheduler), device(medium, profile) {
    device.start_advertising();
  }

  void run(link::Time t = kSecond) { scheduler.run_for(t); }

  link::Scheduler scheduler;
  link::Medium medium;
  Peripheral device;
};

TEST(ProfileTest, FixturesLoadAndRoundTripThroughJson) {
  const auto names = fixture_names();
  ASSERT_GE(names.size(), 4u);
  for (const auto& name : names) {
    const DeviceProfile p = fixture(name);
    EXPECT_FALSE(p.services.empty()) << name;
    const DeviceProfile again = parse_device_profile(to_json(p).dump());
    EXPECT_EQ(to_json(again), to_json(p)) << name;
  }
}

TEST(ProfileTest, RejectsMalformedProfiles) {
  auto j = to_json(fixture("bp_monitor"));
  j["sc_only"] = "Sometimes";
  EXPECT_THROW(parse_device_profile(j.dump()), att::ProfileError);
  EXPECT_THROW(parse_device_profile("{not json"), att::ProfileError);
  EXPECT_THROW(fixture("no_such_device"), std::exception);
}

TEST(ProfileTest, BundledCaseStudyDevices) {
  EXPECT_EQ(fixture("bp_monitor").behavior, Behavior::kBpMonitor);
  EXPECT_EQ(permission_of(fixture("bp_monitor"), kBpMeasurementUuid),
            att::Permission::kOpen);
  EXPECT_EQ(permission_of(fixture("keyboard"), kKeystrokeUuid),
            att::Permission::kEncryptedReadWrite);
  EXPECT_TRUE(fixture("keyboard").whitelist);
  EXPECT_TRUE(fixture("ti_board").ltk_property_caching);
  EXPECT_EQ(fixture("ti_board").sc_only.enforcement,
            smp::ScOnlyEnforcement::kTiFlawedScBitOnly);
}

TEST(BpReadingTest, TextRoundTrip) {
  const BpReading r{128, 84, 71};
  EXPECT_EQ(r.to_text(), "sys=128;dia=84;pul=71");
  EXPECT_EQ(BpReading::parse(r.to_text()), r);
  EXPECT_FALSE(BpReading::parse("sys=1;dia=2"));
  EXPECT_FALSE(BpReading::parse("hello"));
}

TEST(CloneTest, FakeChoosesPermissionsAndIo) {
  const DeviceProfile victim = fixture("keyboard");
  FakeOptions options;
  options.permission = att::Permission::kOpen;
  options.io = IoCapability::kKeyboardOnly;
  options.mitm = true;
  const DeviceProfile fake = clone_profile(victim, options);
  EXPECT_EQ(fake.identity, victim.identity);
  EXPECT_EQ(fake.name, victim.name);
  EXPECT_EQ(fake.features.io, IoCapability::kKeyboardOnly);
  EXPECT_TRUE(fake.features.mitm);
  EXPECT_FALSE(fake.whitelist);
  EXPECT_EQ(permission_of(fake, kKeystrokeUuid), att::Permission::kOpen);
}

// Unlisted identities never get in, whether they show a public address or
// an RPA under some other IRK.
TEST(WhitelistTest, UnlistedIdentitiesAlwaysRejected) {
  DeviceProfile profile = fixture("keyboard");
  Rng rng(5);
  const crypto::Irk listed_irk = rng.bytes<16>();
  const DeviceAddress listed = DeviceAddress::public_identity(0x00A0B0C0D0E0);
  profile.whitelist_entries.push_back({listed_irk, listed});
  Bench bench(profile);
  EXPECT_TRUE(bench.device.accept_connection(listed));
  EXPECT_TRUE(bench.device.accept_connection(
      crypto::rpa_generate(listed_irk, rng)));
  int accepted = 0;
  for (int i = 0; i < 2000; ++i) {
    const DeviceAddress stranger =
        i % 2 == 0
            ? DeviceAddress::public_identity(rng.next_u64())
            : crypto::rpa_generate(rng.bytes<16>(), rng);
    if (stranger == listed) continue;
    accepted += bench.device.accept_connection(stranger) ? 1 : 0;
  }
  EXPECT_EQ(accepted, 0);
}

TEST(WhitelistTest, RejectionHappensBeforePairing) {
  DeviceProfile profile = fixture("keyboard");
  profile.whitelist_entries.push_back(
      {crypto::Irk{1}, DeviceAddress::public_identity(0x00A0B0C0D0E0)});
  Bench bench(profile);
  FakeMobile intruder(bench.medium, FakeMobileOptions());
  intruder.connect(profile.identity);
  bench.run();
  EXPECT_FALSE(intruder.connected());
  EXPECT_EQ(intruder.connect_error(), link::ConnectError::kRejected);
  EXPECT_EQ(bench.device.rejected_connections(), 1u);
  EXPECT_TRUE(bench.device.pairings().empty());
}

TEST(WhitelistTest, StolenIdentityAndIrkPassAndPairJustWorks) {
  DeviceProfile profile = fixture("keyboard");
  Rng rng(6);
  const crypto::Irk irk = rng.bytes<16>();
  const DeviceAddress mobile = DeviceAddress::public_identity(0x00A0B0C0D0E0);
  profile.whitelist_entries.push_back({irk, mobile});
  Bench bench(profile);
  FakeMobile clone(bench.medium, FakeMobileOptions());
  clone.assume_identity(mobile, irk);
  clone.connect(profile.identity);
  bench.run();
  ASSERT_TRUE(clone.connected());
  EXPECT_TRUE(clone.addresses_used().back().is_rpa());
  clone.pair();
  clone.subscribe(kKeystrokeUuid);
  bench.run(5 * kSecond);
  EXPECT_EQ(clone.paired_method(), PairingMethod::kJustWorks);
  ASSERT_FALSE(clone.results().empty());
  EXPECT_FALSE(clone.results().back().status);
  bench.device.type_text("abc");
  bench.run();
  EXPECT_EQ(clone.received_text(kKeystrokeUuid), "abc");
}

TEST(BlockerTest, SlotExhaustion) {
  {
    Bench bench(fixture("bp_monitor"));
    Blocker blocker(bench.medium);
    blocker.block(bench.device.profile().identity, 1);
    bench.run();
    EXPECT_EQ(blocker.held(), 1u);
    FakeMobile mobile(bench.medium, FakeMobileOptions());
    mobile.connect(bench.device.profile().identity);
    bench.run();
    EXPECT_FALSE(mobile.connected());
    blocker.release();
    bench.run();
    mobile.connect(bench.device.profile().identity);
    bench.run();
    EXPECT_TRUE(mobile.connected());
  }
  {
    DeviceProfile roomy = fixture("bp_monitor");
    roomy.slot_limit = 3;
    Bench bench(roomy);
    Blocker blocker(bench.medium);
    blocker.block(roomy.identity, 2);
    bench.run();
    EXPECT_EQ(blocker.held(), 2u);
    FakeMobile mobile(bench.medium, FakeMobileOptions());
    mobile.connect(roomy.identity);
    bench.run();
    EXPECT_TRUE(mobile.connected());
  }
}

TEST(SmartLightTest, CommandsNeedThePasswordOnTheSameLink) {
  const DeviceProfile profile = fixture("smart_light");
  Bench bench(profile);
  FakeMobile stranger(bench.medium, FakeMobileOptions());
  stranger.connect(profile.identity);
  bench.run();
  stranger.write(kLightPasswordUuid, to_bytes("guess"));
  stranger.write(kLightCommandUuid, to_bytes("on"));
  bench.run();
  EXPECT_EQ(bench.device.light_state(), "off");
  ASSERT_EQ(bench.device.rejected_commands().size(), 1u);
  stranger.write(kLightPasswordUuid, to_bytes(profile.password));
  stranger.write(kLightCommandUuid, to_bytes("on"));
  bench.run();
  EXPECT_EQ(bench.device.light_state(), "on");
  stranger.disconnect();
  bench.run();
  // A new link starts without the password.
  stranger.connect(profile.identity);
  bench.run();
  stranger.write(kLightCommandUuid, to_bytes("off"));
  bench.run();
  EXPECT_EQ(bench.device.light_state(), "on");
  EXPECT_EQ(bench.device.rejected_commands().size(), 2u);
}

// One mobile bonded with the genuine device through the host stack.
struct HostBench : Bench {
  explicit HostBench(const DeviceProfile& profile, uint64_t seed = 1)
      : Bench(profile, seed), host(medium, host::HostConfig()) {
    host.user().behavior = smp::UserBehavior::kHonestComparator;
    host.user().counterpart_display = [this] {
      return device.displayed_value();
    };
    host.user().type_on_device = [this](uint32_t passkey) {
      device.type_text(six_digits(passkey));
    };
    device.user().behavior = smp::UserBehavior::kHonestComparator;
    device.user().counterpart_display = [this] {
      return host.displayed_value();
    };
  }

  bool bond() {
    host.create_bond(kApp, device.profile().identity);
    run(10 * kSecond);
    return host.bonds().find(device.profile().identity) != nullptr;
  }

  host::MobileHost host;
};

TEST(BpMonitorTest, EncryptedLinkCarriesOnlyCiphertext) {
  HostBench bench(fixture("bp_monitor"));
  ASSERT_TRUE(bench.bond());
  bench.host.subscribe(kApp, bench.device.profile().identity,
                       kBpMeasurementUuid);
  bench.run();
  const BpReading reading{133, 87, 66};
  EXPECT_EQ(bench.device.publish_reading(reading), 1u);
  bench.run();
  SnifferTap tap(bench.medium.sniffer());
  EXPECT_FALSE(tap.saw_plaintext(reading.to_text()));
  EXPECT_GT(tap.encrypted_frames(), 0u);
  bool delivered = false;
  for (const auto& e : bench.host.events(kApp)) {
    delivered |= e.kind == host::AppEvent::Kind::kNotification &&
                 std::string(e.value.begin(), e.value.end()) ==
                     reading.to_text();
  }
  EXPECT_TRUE(delivered);
}

TEST(KeyboardTest, TypingFillsAPendingPasskeyPrompt) {
  HostBench bench(fixture("keyboard_passkey"));
  ASSERT_TRUE(bench.bond());
  const Bond* bond = bench.host.bonds().find(bench.device.profile().identity);
  EXPECT_TRUE(bond->authenticated);
  ASSERT_FALSE(bench.device.pairings().empty());
  EXPECT_EQ(bench.device.pairings().back().method,
            PairingMethod::kPasskeyEntry);
}

// Secure pairing first, then a cloned identity re-pairs with Just Works.
// Only a caching stack lets the clone read authenticated attributes.
TEST(TiCachingTest, ClonedJustWorksInheritsAuthenticationOnlyWhenCaching) {
  for (bool caching : {true, false}) {
    DeviceProfile profile = fixture("ti_board");
    profile.sc_only = {};
    profile.ltk_property_caching = caching;
    HostBench bench(profile, caching ? 31 : 32);
    ASSERT_TRUE(bench.bond());
    ASSERT_TRUE(bench.device.bonds().front().authenticated);
    bench.host.disconnect(kApp, profile.identity);
    bench.run();
    FakeMobile clone(bench.medium, FakeMobileOptions());
    clone.assume_identity(bench.host.identity(), bench.host.irk());
    clone.connect(profile.identity);
    bench.run();
    clone.pair();
    clone.read(att::Uuid::from16(0xFFF1));
    bench.run(5 * kSecond);
    ASSERT_EQ(clone.paired_method(), PairingMethod::kJustWorks);
    ASSERT_FALSE(clone.results().empty());
    if (caching) {
      EXPECT_FALSE(clone.results().back().status);
      EXPECT_TRUE(bench.device.bonds().front().authenticated);
    } else {
      EXPECT_EQ(clone.results().back().status,
                att::ErrorCode::kInsufficientAuthentication);
    }
  }
}

TEST(SixDigitsTest, ZeroPads) {
  EXPECT_EQ(six_digits(42), "000042");
  EXPECT_EQ(six_digits(999999), "999999");
}

}  // namespace
}  // namespace scosim::peripherals
