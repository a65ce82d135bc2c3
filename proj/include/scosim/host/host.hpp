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

/******************************************************************************
 *
 *  Mobile host stack acting as the central.
 *
 *  Flawed mirrors the stock behavior: create_bond takes no method and
 *  cannot be cancelled, apps learn the method only from late pairing
 *  callbacks, a Pin or Key Missing answer to encryption silently drops the
 *  link to plaintext (and keeps doing so for that peer), an Insufficient
 *  Authentication error starts pairing on the app's behalf without asking,
 *  and apps cannot remove bonds.
 *
 *  Patched adds specify_pairing, checks the negotiated method right after
 *  feature exchange, asks the user before any pairing it did not start, and
 *  lets apps remove their own bonds.
 *
 ******************************************************************************/

#pragma once

#include <deque>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "scosim/att/attribute.hpp"
#include "scosim/host/app_event.hpp"
#include "scosim/host/bond_store.hpp"
#include "scosim/host/registry.hpp"
#include "scosim/link/medium.hpp"
#include "scosim/smp/user_agent.hpp"

namespace scosim::host {

enum class HostVariant : uint8_t { kFlawed, kPatched };

std::string_view to_string(HostVariant variant);
std::optional<HostVariant> parse_host_variant(std::string_view text);

enum class ApiStatus : uint8_t {
  kOk,
  kUnavailable,
  kNotOwner,
  kUnknownBond,
};

std::string_view to_string(ApiStatus status);

struct Prompt {
  enum class Kind : uint8_t {
    // Encryption with a bonded peer failed with Pin or Key Missing.
    kRePair,
    // An attribute needs a stronger link.
    kPairForAccess,
    // The peer sent a Security Request.
    kPairingRequest,
    kWarning,
  };

  link::Time time = 0;
  Kind kind = Kind::kWarning;
  DeviceAddress peer;
  std::string text;
  bool consented = false;

  std::string describe() const;
};

struct HostConfig {
  HostVariant variant = HostVariant::kFlawed;
  std::string label = "mobile";
  DeviceAddress identity = DeviceAddress::public_identity(0x00A0B0C0D0E0);
  IoCapability io = IoCapability::kKeyboardDisplay;
  // Patched only. Loaded at construction and rewritten by specify_pairing.
  std::optional<std::filesystem::path> registry_path;
  PairingRegistry registry;
};

class MobileHost : public link::LinkAgent {
 public:
  MobileHost(link::Medium& medium, HostConfig config);

  // App-facing API. Everything completes asynchronously through AppEvents.
  void connect(const AppId& app, const DeviceAddress& peer);
  void disconnect(const AppId& app, const DeviceAddress& peer);
  // False without pairing when a bond for the peer exists.
  bool create_bond(const AppId& app, const DeviceAddress& peer);
  void read(const AppId& app, const DeviceAddress& peer,
            const att::Uuid& uuid);
  void write(const AppId& app, const DeviceAddress& peer,
             const att::Uuid& uuid, BytesView value);
  void subscribe(const AppId& app, const DeviceAddress& peer,
                 const att::Uuid& uuid);
  ApiStatus specify_pairing(const AppId& app, PairingMethod method);
  ApiStatus remove_bond(const AppId& app, const DeviceAddress& peer_identity);

  // System settings, not reachable by apps.
  bool user_settings_remove_bond(const DeviceAddress& peer_identity);
  void factory_reset();

  // The person holding the phone.
  smp::UserAgent& user() { return user_; }

  std::vector<AppEvent> events(const AppId& app) const;
  const std::vector<Prompt>& prompts() const { return prompts_; }
  const BondStore& bonds() const { return bonds_; }
  const PairingRegistry& registry() const { return registry_; }
  const crypto::Irk& irk() const { return irk_; }
  const DeviceAddress& identity() const { return config_.identity; }
  HostVariant variant() const { return config_.variant; }
  link::DeviceId device_id() const { return device_; }
  // Every resolvable private address this host has used on air.
  const std::vector<DeviceAddress>& addresses_used() const {
    return addresses_used_;
  }

  // Observability for tests and reports; apps cannot see these.
  std::optional<link::ConnectionId> connection_to(
      const DeviceAddress& peer) const;
  std::optional<att::LinkSecurityState> link_security(
      const DeviceAddress& peer) const;
  bool pairing(const DeviceAddress& peer) const;
  // Comparison value or passkey currently on screen, if any.
  std::optional<uint32_t> displayed_value() const;

  // LinkAgent.
  std::string label() const override { return config_.label; }
  std::optional<link::LtkRecord> ltk_for(link::ConnectionId id) override;
  void on_disconnected(link::ConnectionId id,
                       link::DisconnectReason reason) override;
  void on_att(link::ConnectionId id, const att::Pdu& pdu) override;
  void on_encryption_changed(link::ConnectionId id,
                             link::EncryptionResult result) override;
  void on_security_request(link::ConnectionId id,
                           const PairingFeatures& features) override;
  smp::SessionConfig pairing_config(link::ConnectionId id,
                                    smp::Role role) override;
  const smp::UserAgent* user_agent(link::ConnectionId id) override;
  void on_pairing_event(link::ConnectionId id,
                        const link::PairingEvent& event) override;

 private:
  struct GattOp {
    enum class Kind : uint8_t { kRead, kWrite, kSubscribe };
    AppId app;
    Kind kind = Kind::kRead;
    att::Uuid uuid;
    Bytes value;
  };

  struct PeerLink {
    DeviceAddress target;
    std::optional<link::ConnectionId> id;
    std::set<AppId> apps;
    bool announced = false;
    bool discovered = false;
    bool securing = false;
    bool suspended = false;
    bool pairing = false;
    bool mitm = false;
    std::set<AppId> pairing_apps;
    std::optional<KeySet> pending_keys;
    std::map<att::Uuid, uint16_t> handles;
    std::map<uint16_t, att::Uuid> uuids;
    std::deque<GattOp> ops;
    std::optional<GattOp> in_flight;
  };

  PeerLink& ensure_link(const AppId& app, const DeviceAddress& peer);
  PeerLink* link_by_id(link::ConnectionId id);
  const PeerLink* link_by_target(const DeviceAddress& peer) const;
  void on_connect_result(DeviceAddress target,
                         const link::ConnectResult& result);
  void secure_or_discover(PeerLink& link);
  void discover(PeerLink& link);
  void pump(PeerLink& link);
  void finish_op(PeerLink& link, std::optional<att::ErrorCode> status,
                 Bytes value);
  void on_insufficient_authentication(PeerLink& link, const AppId& app);
  void begin_pairing(PeerLink& link, std::set<AppId> apps, bool mitm);
  bool ask_user(Prompt::Kind kind, PeerLink& link, std::string text);
  void warn(PeerLink& link, std::string text);
  void emit(const AppId& app, AppEvent event);
  void emit_all(const PeerLink& link, const AppEvent& event);
  std::optional<PairingMethod> required_method(const PeerLink& link) const;
  bool patched() const { return config_.variant == HostVariant::kPatched; }
  void drop_link(const DeviceAddress& target);

  link::Medium& medium_;
  HostConfig config_;
  link::DeviceId device_;
  crypto::Irk irk_{};
  smp::UserAgent user_;
  BondStore bonds_;
  PairingRegistry registry_;
  std::map<DeviceAddress, PeerLink> links_;
  std::map<link::ConnectionId, DeviceAddress> by_connection_;
  std::map<DeviceAddress, std::set<AppId>> device_apps_;
  std::set<DeviceAddress> plaintext_fallback_;
  std::map<AppId, std::vector<AppEvent>> events_;
  std::vector<Prompt> prompts_;
  std::vector<DeviceAddress> addresses_used_;
};

}  // namespace scosim::host
