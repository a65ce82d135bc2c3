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
#include <filesystem>
#include <fstream>

#include "scosim/crypto.hpp"
#include "scosim/host/bond_store.hpp"
#include "scosim/host/host.hpp"
#include "scosim/host/registry.hpp"
#include "scosim/link/medium.hpp"
#include "scosim/peripherals/attackers.hpp"
#include "scosim/peripherals/device.hpp"
#include "scosim/rng.hpp"
#include "scosim/smp/pdu.hpp"

namespace scosim::host {
namespace {

using link::Medium;
using link::Scheduler;
using peripherals::DeviceProfile;
using peripherals::FakeDevice;
using peripherals::Peripheral;

const AppId kApp = "com.example.health";
const AppId kOtherApp = "com.example.other";

DeviceProfile generic_profile(IoCapability io, bool mitm) {
  DeviceProfile p;
  p.name = "Sensor";
  p.identity = DeviceAddress::public_identity(0xC0FFEE000001);
  p.features.io = io;
  p.features.mitm = mitm;
  p.adv_frequency_hz = 20.0;
  att::ServiceSpec service;
  service.uuid = att::Uuid::from16(0x180D);
  service.characteristics.push_back(
      {att::Uuid::from16(0x2A37), att::Permission::kOpen, to_bytes("72"),
       true});
  service.characteristics.push_back(
      {att::Uuid::from16(0x2A38), att::Permission::kEncryptedReadWrite,
       to_bytes("chest"), false});
  p.services.push_back(service);
  return p;
}

HostConfig host_config(HostVariant variant) {
  HostConfig config;
  config.variant = variant;
  return config;
}

const att::Uuid kOpenChar = att::Uuid::from16(0x2A37);
const att::Uuid kEncryptedChar = att::Uuid::from16(0x2A38);

// One mobile and one honest peripheral on a fresh medium.
struct World {
  World(HostVariant variant, const DeviceProfile& profile, uint64_t seed)
      : scheduler(seed),
        medium(scheduler),
        host(medium, host_config(variant)),
        device(medium, profile) {
    host.user().behavior = smp::UserBehavior::kHonestComparator;
    host.user().counterpart_display = [this] {
      return device.displayed_value();
    };
    host.user().type_on_device = [this](uint32_t passkey) {
      device.type_text(peripherals::six_digits(passkey));
    };
    device.user().behavior = smp::UserBehavior::kHonestComparator;
    device.user().counterpart_display = [this] {
      return host.displayed_value();
    };
    device.start_advertising();
  }

  DeviceAddress peer() const { return device.profile().identity; }

  bool bond(const AppId& app = kApp) {
    const bool started = host.create_bond(app, peer());
    scheduler.run_for(5 * link::kSecond);
    return started;
  }

  void reconnect(const AppId& app = kApp) {
    host.disconnect(app, peer());
    scheduler.run_for(link::kSecond);
    host.connect(app, peer());
    scheduler.run_for(link::kSecond);
  }

  Scheduler scheduler;
  Medium medium;
  MobileHost host;
  Peripheral device;
};

bool has_event(const std::vector<AppEvent>& events, AppEvent::Kind kind) {
  return std::any_of(events.begin(), events.end(),
                     [kind](const AppEvent& e) { return e.kind == kind; });
}

size_t count_prompts(const MobileHost& host) {
  size_t n = 0;
  for (const auto& p : host.prompts()) {
    n += p.kind != Prompt::Kind::kWarning ? 1 : 0;
  }
  return n;
}

TEST(BondStoreTest, RefcountMatchesOwnersUnderRandomOperations) {
  Rng rng(99);
  const std::vector<AppId> apps = {"a", "b", "c", "d"};
  for (int run = 0; run < 50; ++run) {
    BondStore store;
    for (int step = 0; step < 200; ++step) {
      const auto peer = DeviceAddress::public_identity(rng.uniform(1, 4));
      const AppId& app = apps[rng.uniform(0, apps.size() - 1)];
      switch (rng.uniform(0, 3)) {
        case 0: {
          Bond b;
          b.peer_identity = peer;
          b.ltk = rng.bytes<16>();
          b.owner_apps = {app};
          store.put(b);
          break;
        }
        case 1:
          store.add_owner(peer, app);
          break;
        case 2:
          store.remove_owner(peer, app);
          break;
        case 3:
          if (rng.uniform(0, 4) == 0) store.erase(peer);
          break;
      }
      ASSERT_TRUE(store.consistent()) << "run " << run << " step " << step;
      for (const Bond& b : store.all()) {
        EXPECT_EQ(b.refcount, b.owner_apps.size());
        EXPECT_GT(b.refcount, 0u);
      }
    }
  }
}

TEST(BondStoreTest, RemoveOwnerSemantics) {
  BondStore store;
  const auto peer = DeviceAddress::public_identity(7);
  Bond b;
  b.peer_identity = peer;
  b.owner_apps = {"a", "b"};
  store.put(b);
  EXPECT_EQ(store.find(peer)->refcount, 2u);
  EXPECT_EQ(store.remove_owner(peer, "c"), OwnerRemoval::kNotOwner);
  EXPECT_EQ(store.remove_owner(peer, "a"), OwnerRemoval::kRemoved);
  ASSERT_TRUE(store.find(peer));
  EXPECT_EQ(store.find(peer)->refcount, 1u);
  EXPECT_EQ(store.remove_owner(peer, "b"), OwnerRemoval::kRemoved);
  EXPECT_FALSE(store.find(peer));
  EXPECT_EQ(store.remove_owner(peer, "b"), OwnerRemoval::kUnknownBond);
}

TEST(BondStoreTest, FindsRpaThroughPeerIrk) {
  BondStore store;
  Rng rng(3);
  const crypto::Irk irk = rng.bytes<16>();
  Bond b;
  b.peer_identity = DeviceAddress::public_identity(0x112233445566);
  b.peer_irk = irk;
  b.owner_apps = {"a"};
  store.put(b);
  EXPECT_TRUE(store.find_by_address(crypto::rpa_generate(irk, rng)));
  EXPECT_FALSE(store.find_by_address(crypto::rpa_generate(rng.bytes<16>(), rng)));
}

TEST(RegistryTest, ParseAndRoundTrip) {
  auto r = PairingRegistry::parse(
      "# comment\n"
      "com.a = NumericComparison\n"
      "  com.b=PasskeyEntry  \n"
      "\n");
  EXPECT_EQ(r.specified("com.a"), PairingMethod::kNumericComparison);
  EXPECT_EQ(r.specified("com.b"), PairingMethod::kPasskeyEntry);
  EXPECT_FALSE(r.specified("com.c"));
  EXPECT_EQ(PairingRegistry::parse(r.to_text()).entries(), r.entries());
}

TEST(RegistryTest, RejectsMalformedLines) {
  EXPECT_THROW(PairingRegistry::parse("com.a NumericComparison\n"),
               RegistryError);
  EXPECT_THROW(PairingRegistry::parse("com.a = Telepathy\n"), RegistryError);
  EXPECT_THROW(PairingRegistry::parse(" = JustWorks\n"), RegistryError);
}

TEST(RegistryTest, StrongestSpecifiedMethodWins) {
  PairingRegistry r;
  r.specify("jw", PairingMethod::kJustWorks);
  r.specify("pe", PairingMethod::kPasskeyEntry);
  r.specify("nc", PairingMethod::kNumericComparison);
  r.specify("oob", PairingMethod::kOutOfBand);
  EXPECT_EQ(r.required({"jw"}), PairingMethod::kJustWorks);
  EXPECT_EQ(r.required({"jw", "pe"}), PairingMethod::kPasskeyEntry);
  EXPECT_EQ(r.required({"pe", "nc"}), PairingMethod::kNumericComparison);
  EXPECT_EQ(r.required({"pe", "oob", "nc"}),
            PairingMethod::kNumericComparison);
  EXPECT_EQ(r.required({"jw", "unknown"}), PairingMethod::kJustWorks);
  EXPECT_FALSE(r.required({"unknown"}));
}

TEST(RegistryTest, PersistsAcrossHostInstances) {
  const auto path =
      std::filesystem::temp_directory_path() / "scosim_registry_test.conf";
  std::filesystem::remove(path);
  {
    Scheduler scheduler(1);
    Medium medium(scheduler);
    HostConfig config = host_config(HostVariant::kPatched);
    config.registry_path = path;
    MobileHost host(medium, config);
    EXPECT_TRUE(host.registry().entries().empty());
    EXPECT_EQ(host.specify_pairing(kApp, PairingMethod::kNumericComparison),
              ApiStatus::kOk);
  }
  Scheduler scheduler(2);
  Medium medium(scheduler);
  HostConfig config = host_config(HostVariant::kPatched);
  config.registry_path = path;
  MobileHost host(medium, config);
  EXPECT_EQ(host.registry().specified(kApp),
            PairingMethod::kNumericComparison);
  std::filesystem::remove(path);
}

TEST(MobileHostTest, HonestBondingAndCreateBondOnBondedPeer) {
  for (HostVariant v : {HostVariant::kFlawed, HostVariant::kPatched}) {
    World w(v, generic_profile(IoCapability::kDisplayYesNo, true), 11);
    EXPECT_TRUE(w.bond());
    const Bond* bond = w.host.bonds().find(w.peer());
    ASSERT_TRUE(bond) << to_string(v);
    EXPECT_TRUE(bond->authenticated);
    EXPECT_EQ(bond->owner_apps, std::set<AppId>{kApp});
    EXPECT_FALSE(w.host.create_bond(kApp, w.peer()));
    auto events = w.host.events(kApp);
    ASSERT_FALSE(events.empty());
    EXPECT_EQ(events.back().kind, AppEvent::Kind::kBondStateChanged);
    EXPECT_EQ(events.back().bond_state, BondState::kBonded);
    // The peer received the mobile's identity key.
    ASSERT_EQ(w.device.received_identities().size(), 1u);
    EXPECT_EQ(w.device.received_identities()[0].irk, w.host.irk());
  }
}

TEST(MobileHostTest, ReconnectEncryptsWithStoredBond) {
  World w(HostVariant::kFlawed,
          generic_profile(IoCapability::kDisplayYesNo, true), 12);
  ASSERT_TRUE(w.bond());
  w.reconnect();
  auto security = w.host.link_security(w.peer());
  ASSERT_TRUE(security);
  EXPECT_TRUE(security->is_encrypted());
  EXPECT_TRUE(security->key_authenticated());
}

TEST(MobileHostTest, FlawedMethodVisibleOnlyThroughLateCallbacks) {
  World w(HostVariant::kFlawed,
          generic_profile(IoCapability::kDisplayYesNo, true), 13);
  ASSERT_TRUE(w.bond());
  auto events = w.host.events(kApp);
  EXPECT_FALSE(has_event(events, AppEvent::Kind::kMethodNegotiated));
  EXPECT_TRUE(has_event(events, AppEvent::Kind::kPairingVariantObserved));
}

TEST(MobileHostTest, PatchedReportsMethodBeforeCompletion) {
  World w(HostVariant::kPatched,
          generic_profile(IoCapability::kDisplayYesNo, true), 14);
  ASSERT_TRUE(w.bond());
  auto events = w.host.events(kApp);
  auto negotiated =
      std::find_if(events.begin(), events.end(), [](const AppEvent& e) {
        return e.kind == AppEvent::Kind::kMethodNegotiated;
      });
  auto bonded = std::find_if(events.begin(), events.end(), [](const AppEvent& e) {
    return e.kind == AppEvent::Kind::kBondStateChanged &&
           e.bond_state == BondState::kBonded;
  });
  ASSERT_NE(negotiated, events.end());
  ASSERT_NE(bonded, events.end());
  EXPECT_LT(negotiated - events.begin(), bonded - events.begin());
  EXPECT_EQ(negotiated->method, PairingMethod::kNumericComparison);
}

TEST(MobileHostTest, FlawedApisAreUnavailable) {
  World w(HostVariant::kFlawed,
          generic_profile(IoCapability::kDisplayYesNo, true), 15);
  ASSERT_TRUE(w.bond());
  EXPECT_EQ(w.host.specify_pairing(kApp, PairingMethod::kNumericComparison),
            ApiStatus::kUnavailable);
  EXPECT_EQ(w.host.remove_bond(kApp, w.peer()), ApiStatus::kUnavailable);
  EXPECT_TRUE(w.host.bonds().find(w.peer()));
  EXPECT_TRUE(w.host.user_settings_remove_bond(w.peer()));
  EXPECT_FALSE(w.host.bonds().find(w.peer()));
}

TEST(MobileHostTest, PatchedRemoveBondFollowsOwnership) {
  World w(HostVariant::kPatched,
          generic_profile(IoCapability::kDisplayYesNo, true), 16);
  ASSERT_TRUE(w.bond());
  EXPECT_EQ(w.host.remove_bond(kOtherApp, w.peer()), ApiStatus::kNotOwner);
  EXPECT_EQ(w.host.remove_bond(kApp, DeviceAddress::public_identity(1)),
            ApiStatus::kUnknownBond);
  EXPECT_EQ(w.host.remove_bond(kApp, w.peer()), ApiStatus::kOk);
  EXPECT_FALSE(w.host.bonds().find(w.peer()));
  EXPECT_TRUE(w.host.create_bond(kApp, w.peer()));
}

TEST(MobileHostTest, PatchedBondSharedByTwoAppsSurvivesOneRemoval) {
  World w(HostVariant::kPatched,
          generic_profile(IoCapability::kDisplayYesNo, true), 17);
  w.host.connect(kOtherApp, w.peer());
  ASSERT_TRUE(w.bond());
  // Both apps were using the device when pairing ran on kApp's behalf; the
  // second app claims ownership by bonding too.
  EXPECT_FALSE(w.host.create_bond(kOtherApp, w.peer()));
  const Bond* bond = w.host.bonds().find(w.peer());
  ASSERT_TRUE(bond);
  EXPECT_EQ(bond->refcount, bond->owner_apps.size());
}

TEST(MobileHostTest, FactoryResetRotatesIrk) {
  Scheduler scheduler(5);
  Medium medium(scheduler);
  MobileHost host(medium, HostConfig());
  const crypto::Irk first = host.irk();
  host.factory_reset();
  const crypto::Irk second = host.irk();
  host.factory_reset();
  EXPECT_NE(first, second);
  EXPECT_NE(second, host.irk());
  EXPECT_EQ(host.bonds().size(), 0u);
  Rng rng(6);
  int resolved = 0;
  for (int i = 0; i < 1000; ++i) {
    resolved += crypto::rpa_resolve(first, crypto::rpa_generate(host.irk(), rng));
  }
  EXPECT_EQ(resolved, 0);
}

TEST(MobileHostTest, EachConnectionUsesAFreshRpa) {
  World w(HostVariant::kFlawed,
          generic_profile(IoCapability::kDisplayYesNo, true), 18);
  w.host.connect(kApp, w.peer());
  w.scheduler.run_for(link::kSecond);
  w.reconnect();
  ASSERT_EQ(w.host.addresses_used().size(), 2u);
  EXPECT_NE(w.host.addresses_used()[0], w.host.addresses_used()[1]);
  for (const auto& a : w.host.addresses_used()) {
    EXPECT_TRUE(a.is_rpa());
    EXPECT_TRUE(crypto::rpa_resolve(w.host.irk(), a));
  }
}

// The bonded peer has been swapped for a keyless clone.
struct SwapWorld : World {
  SwapWorld(HostVariant v, uint64_t seed)
      : World(v, generic_profile(IoCapability::kDisplayYesNo, true), seed) {}

  FakeDevice& swap_in_fake(att::Permission permission) {
    device.power_off();
    fake = std::make_unique<FakeDevice>(medium, device.profile(),
                                        peripherals::FakeOptions{permission});
    fake->start_advertising();
    scheduler.run_for(link::kSecond);
    return *fake;
  }

  std::unique_ptr<FakeDevice> fake;
};

TEST(MobileHostTest, FlawedSilentlyFallsBackToPlaintextOnPinOrKeyMissing) {
  SwapWorld w(HostVariant::kFlawed, 19);
  ASSERT_TRUE(w.bond());
  w.host.disconnect(kApp, w.peer());
  const auto bonds_before = w.host.bonds().all();
  w.swap_in_fake(att::Permission::kOpen);
  const size_t events_before = w.host.events(kApp).size();
  w.host.connect(kApp, w.peer());
  w.host.read(kApp, w.peer(), kOpenChar);
  w.scheduler.run_for(link::kSecond);
  auto security = w.host.link_security(w.peer());
  ASSERT_TRUE(security);
  EXPECT_FALSE(security->is_encrypted());
  EXPECT_EQ(count_prompts(w.host), 0u);
  auto events = w.host.events(kApp);
  for (size_t i = events_before; i < events.size(); ++i) {
    EXPECT_NE(events[i].kind, AppEvent::Kind::kError) << events[i].describe();
    EXPECT_NE(events[i].kind, AppEvent::Kind::kUserPromptRequired);
  }
  EXPECT_EQ(w.host.bonds().all().size(), bonds_before.size());
  EXPECT_EQ(w.host.bonds().find(w.peer())->ltk, bonds_before[0].ltk);
}

TEST(MobileHostTest, FlawedPairsSilentlyOnInsufficientAuthentication) {
  SwapWorld w(HostVariant::kFlawed, 20);
  ASSERT_TRUE(w.bond());
  w.host.disconnect(kApp, w.peer());
  FakeDevice& fake = w.swap_in_fake(att::Permission::kEncryptedReadWrite);
  w.host.connect(kApp, w.peer());
  w.host.read(kApp, w.peer(), kEncryptedChar);
  w.scheduler.run_for(5 * link::kSecond);
  EXPECT_EQ(count_prompts(w.host), 0u);
  auto stolen = fake.stolen_identity();
  ASSERT_TRUE(stolen);
  EXPECT_EQ(stolen->irk, w.host.irk());
  EXPECT_EQ(stolen->identity, w.host.identity());
  // The app saw a GATT status, nothing about pairing being forced.
  auto events = w.host.events(kApp);
  EXPECT_TRUE(std::any_of(events.begin(), events.end(), [](const AppEvent& e) {
    return e.kind == AppEvent::Kind::kGattResult &&
           e.status == att::ErrorCode::kInsufficientAuthentication;
  }));
  EXPECT_FALSE(w.host.bonds().find(w.peer())->authenticated);
}

TEST(MobileHostTest, PatchedPromptsOnPinOrKeyMissingAndHonorsDecline) {
  SwapWorld w(HostVariant::kPatched, 21);
  ASSERT_TRUE(w.bond());
  w.host.disconnect(kApp, w.peer());
  FakeDevice& fake = w.swap_in_fake(att::Permission::kOpen);
  w.host.user().intends_to_pair = false;
  w.host.connect(kApp, w.peer());
  w.scheduler.run_for(2 * link::kSecond);
  ASSERT_FALSE(w.host.prompts().empty());
  EXPECT_EQ(w.host.prompts().front().kind, Prompt::Kind::kRePair);
  EXPECT_FALSE(w.host.connection_to(w.peer()));
  EXPECT_TRUE(fake.pairings().empty());
}

TEST(MobileHostTest, PatchedGuardAbortsBeforeAnyKeyDistribution) {
  SwapWorld w(HostVariant::kPatched, 22);
  w.host.specify_pairing(kApp, PairingMethod::kNumericComparison);
  ASSERT_TRUE(w.bond());
  w.host.disconnect(kApp, w.peer());
  FakeDevice& fake = w.swap_in_fake(att::Permission::kEncryptedReadWrite);
  w.host.connect(kApp, w.peer());
  w.host.read(kApp, w.peer(), kEncryptedChar);
  w.scheduler.run_for(5 * link::kSecond);
  EXPECT_FALSE(fake.stolen_identity());
  ASSERT_FALSE(fake.pairings().empty());
  EXPECT_EQ(fake.pairings().back().error, SecurityError::kPairingAuthFail);
  EXPECT_FALSE(w.host.connection_to(w.peer()));
  EXPECT_TRUE(std::any_of(
      w.host.prompts().begin(), w.host.prompts().end(),
      [](const Prompt& p) { return p.kind == Prompt::Kind::kWarning; }));
  // No SMP key distribution or public key ever went on air.
  for (const auto& r : w.medium.sniffer().records()) {
    if (r.destination == "broadcast" || r.encrypted || r.data.size() < 2 ||
        r.data[0] != static_cast<uint8_t>(link::Channel::kSmp)) {
      continue;
    }
    if (r.time < w.host.prompts().front().time) continue;
    const auto op = static_cast<smp::Opcode>(r.data[1]);
    EXPECT_NE(op, smp::Opcode::kIdentityInformation);
    EXPECT_NE(op, smp::Opcode::kIdentityAddressInformation);
    EXPECT_NE(op, smp::Opcode::kPairingPublicKey);
  }
}

// The patched host never keeps a bond weaker than the app asked for,
// whatever the peer offers.
TEST(MobileHostTest, PatchedNeverCompletesWeakerThanSpecified) {
  uint64_t seed = 100;
  for (PairingMethod specified : kAllPairingMethods) {
    if (specified == PairingMethod::kOutOfBand) continue;
    for (IoCapability io : kAllIoCapabilities) {
      for (bool mitm : {false, true}) {
        World w(HostVariant::kPatched, generic_profile(io, mitm), seed++);
        w.host.specify_pairing(kApp, specified);
        w.bond();
        const Bond* bond = w.host.bonds().find(w.peer());
        if (!bond) continue;
        if (is_authenticated(specified)) {
          EXPECT_TRUE(bond->authenticated)
              << to_string(specified) << " " << to_string(io) << " " << mitm;
        }
        auto events = w.host.events(kApp);
        for (const auto& e : events) {
          if (e.kind == AppEvent::Kind::kBondStateChanged &&
              e.bond_state == BondState::kBonded) {
            EXPECT_EQ(e.method, specified)
                << to_string(io) << " " << mitm;
          }
        }
      }
    }
  }
}

TEST(MobileHostTest, FlawedNeverPromptsAcrossPeers) {
  uint64_t seed = 300;
  for (IoCapability io : kAllIoCapabilities) {
    SwapWorld w(HostVariant::kFlawed, seed++);
    w.device.user().behavior = smp::UserBehavior::kHonestComparator;
    ASSERT_TRUE(w.bond());
    w.host.disconnect(kApp, w.peer());
    peripherals::FakeOptions options{att::Permission::kEncryptedReadWrite, io};
    w.device.power_off();
    FakeDevice fake(w.medium, w.device.profile(), options);
    fake.start_advertising();
    w.host.connect(kApp, w.peer());
    w.host.read(kApp, w.peer(), kEncryptedChar);
    w.scheduler.run_for(5 * link::kSecond);
    EXPECT_EQ(count_prompts(w.host), 0u) << to_string(io);
  }
}

}  // namespace
}  // namespace scosim::host
