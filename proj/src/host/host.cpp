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

#include "scosim/host/host.hpp"

#include <utility>

#include "scosim/crypto.hpp"

namespace scosim::host {

namespace ll = scosim::link;

namespace {

constexpr uint8_t kHciAuthenticationFailure = 0x05;
constexpr uint8_t kHciPinOrKeyMissing = 0x06;
constexpr uint8_t kHciMicFailure = 0x3D;
constexpr uint8_t kHciConnectionFailed = 0x3E;
constexpr uint8_t kHciRemoteUserTerminated = 0x13;
constexpr uint8_t kHciLocalHostTerminated = 0x16;

uint8_t hci_code(ll::DisconnectReason reason) {
  switch (reason) {
    case ll::DisconnectReason::kLocalHost:
      return kHciLocalHostTerminated;
    case ll::DisconnectReason::kRemoteUser:
      return kHciRemoteUserTerminated;
    case ll::DisconnectReason::kMicFailure:
      return kHciMicFailure;
  }
  return 0;
}

}  // namespace

std::string_view to_string(HostVariant variant) {
  switch (variant) {
    case HostVariant::kFlawed:
      return "Flawed";
    case HostVariant::kPatched:
      return "Patched";
  }
  return "?";
}

std::optional<HostVariant> parse_host_variant(std::string_view text) {
  if (text == "Flawed" || text == "flawed") return HostVariant::kFlawed;
  if (text == "Patched" || text == "patched") return HostVariant::kPatched;
  return std::nullopt;
}

std::string_view to_string(ApiStatus status) {
  switch (status) {
    case ApiStatus::kOk:
      return "Ok";
    case ApiStatus::kUnavailable:
      return "Unavailable";
    case ApiStatus::kNotOwner:
      return "NotOwner";
    case ApiStatus::kUnknownBond:
      return "UnknownBond";
  }
  return "?";
}

std::string Prompt::describe() const {
  std::string kind_text;
  switch (kind) {
    case Kind::kRePair:
      kind_text = "RePair";
      break;
    case Kind::kPairForAccess:
      kind_text = "PairForAccess";
      break;
    case Kind::kPairingRequest:
      kind_text = "PairingRequest";
      break;
    case Kind::kWarning:
      kind_text = "Warning";
      break;
  }
  return kind_text + " " + peer.to_string() + " \"" + text + "\"" +
         (consented ? " consented" : "");
}

MobileHost::MobileHost(ll::Medium& medium, HostConfig config)
    : medium_(medium), config_(std::move(config)) {
  device_ = medium_.attach(*this);
  irk_ = medium_.scheduler().rng().bytes<16>();
  registry_ = config_.registry;
  if (config_.registry_path) {
    registry_ = PairingRegistry::load(*config_.registry_path);
  }
}

// ---------------------------------------------------------------------------
// App API.

void MobileHost::connect(const AppId& app, const DeviceAddress& peer) {
  PeerLink& link = ensure_link(app, peer);
  if (link.announced) {
    AppEvent e;
    e.kind = AppEvent::Kind::kConnected;
    e.peer = peer;
    emit(app, e);
  }
}

void MobileHost::disconnect(const AppId& app, const DeviceAddress& peer) {
  auto it = links_.find(peer);
  if (it == links_.end()) return;
  it->second.apps.erase(app);
  if (it->second.apps.empty() && it->second.id) {
    medium_.disconnect(*it->second.id, ll::DisconnectReason::kLocalHost);
  }
}

bool MobileHost::create_bond(const AppId& app, const DeviceAddress& peer) {
  if (bonds_.find_by_address(peer)) return false;
  PeerLink& link = ensure_link(app, peer);
  if (link.pairing) return true;
  bool mitm = true;
  if (patched()) {
    device_apps_[peer].insert(app);
    if (auto required = required_method(link)) {
      mitm = is_authenticated(*required);
    }
  }
  link.pairing = true;
  link.mitm = mitm;
  link.pairing_apps = {app};
  if (link.id && link.discovered) begin_pairing(link, {app}, mitm);
  // Otherwise pairing starts once discovery completes.
  return true;
}

void MobileHost::read(const AppId& app, const DeviceAddress& peer,
                      const att::Uuid& uuid) {
  PeerLink& link = ensure_link(app, peer);
  link.ops.push_back({app, GattOp::Kind::kRead, uuid, {}});
  pump(link);
}

void MobileHost::write(const AppId& app, const DeviceAddress& peer,
                       const att::Uuid& uuid, BytesView value) {
  PeerLink& link = ensure_link(app, peer);
  link.ops.push_back(
      {app, GattOp::Kind::kWrite, uuid, Bytes(value.begin(), value.end())});
  pump(link);
}

void MobileHost::subscribe(const AppId& app, const DeviceAddress& peer,
                           const att::Uuid& uuid) {
  PeerLink& link = ensure_link(app, peer);
  link.ops.push_back({app, GattOp::Kind::kSubscribe, uuid, {0x01, 0x00}});
  pump(link);
}

ApiStatus MobileHost::specify_pairing(const AppId& app, PairingMethod method) {
  if (!patched()) return ApiStatus::kUnavailable;
  registry_.specify(app, method);
  if (config_.registry_path) registry_.save(*config_.registry_path);
  return ApiStatus::kOk;
}

ApiStatus MobileHost::remove_bond(const AppId& app,
                                  const DeviceAddress& peer_identity) {
  if (!patched()) return ApiStatus::kUnavailable;
  switch (bonds_.remove_owner(peer_identity, app)) {
    case OwnerRemoval::kRemoved:
      if (!bonds_.find(peer_identity)) plaintext_fallback_.erase(peer_identity);
      return ApiStatus::kOk;
    case OwnerRemoval::kNotOwner:
      return ApiStatus::kNotOwner;
    case OwnerRemoval::kUnknownBond:
      return ApiStatus::kUnknownBond;
  }
  return ApiStatus::kUnknownBond;
}

bool MobileHost::user_settings_remove_bond(const DeviceAddress& peer_identity) {
  plaintext_fallback_.erase(peer_identity);
  return bonds_.erase(peer_identity);
}

void MobileHost::factory_reset() {
  irk_ = medium_.scheduler().rng().bytes<16>();
  bonds_.clear();
  plaintext_fallback_.clear();
}

std::vector<AppEvent> MobileHost::events(const AppId& app) const {
  auto it = events_.find(app);
  if (it == events_.end()) return {};
  return it->second;
}

std::optional<ll::ConnectionId> MobileHost::connection_to(
    const DeviceAddress& peer) const {
  const PeerLink* link = link_by_target(peer);
  if (!link) return std::nullopt;
  return link->id;
}

std::optional<att::LinkSecurityState> MobileHost::link_security(
    const DeviceAddress& peer) const {
  const PeerLink* link = link_by_target(peer);
  if (!link || !link->id) return std::nullopt;
  const ll::Connection* c = medium_.connection(*link->id);
  if (!c || !c->alive) return std::nullopt;
  return c->security;
}

bool MobileHost::pairing(const DeviceAddress& peer) const {
  const PeerLink* link = link_by_target(peer);
  return link && link->pairing;
}

std::optional<uint32_t> MobileHost::displayed_value() const {
  for (const auto& [target, link] : links_) {
    if (!link.id) continue;
    if (auto v = medium_.displayed_value(*link.id, device_)) return v;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Connection management.

MobileHost::PeerLink& MobileHost::ensure_link(const AppId& app,
                                              const DeviceAddress& peer) {
  device_apps_[peer].insert(app);
  auto [it, inserted] = links_.try_emplace(peer);
  PeerLink& link = it->second;
  link.apps.insert(app);
  if (inserted) {
    link.target = peer;
    const DeviceAddress own =
        crypto::rpa_generate(irk_, medium_.scheduler().rng());
    addresses_used_.push_back(own);
    medium_.connect(device_, own, peer,
                    [this, peer](const ll::ConnectResult& result) {
                      on_connect_result(peer, result);
                    });
  }
  return link;
}

MobileHost::PeerLink* MobileHost::link_by_id(ll::ConnectionId id) {
  auto it = by_connection_.find(id);
  if (it == by_connection_.end()) return nullptr;
  auto link = links_.find(it->second);
  return link == links_.end() ? nullptr : &link->second;
}

const MobileHost::PeerLink* MobileHost::link_by_target(
    const DeviceAddress& peer) const {
  auto it = links_.find(peer);
  return it == links_.end() ? nullptr : &it->second;
}

void MobileHost::on_connect_result(DeviceAddress target,
                                   const ll::ConnectResult& result) {
  auto it = links_.find(target);
  if (it == links_.end()) return;
  PeerLink& link = it->second;
  if (!result.connection) {
    AppEvent e;
    e.kind = AppEvent::Kind::kError;
    e.peer = target;
    e.code = kHciConnectionFailed;
    e.reason = std::string("connect failed: ") +
               std::string(ll::to_string(result.error));
    emit_all(link, e);
    drop_link(target);
    return;
  }
  link.id = *result.connection;
  by_connection_[*result.connection] = target;
  secure_or_discover(link);
}

void MobileHost::secure_or_discover(PeerLink& link) {
  const Bond* bond = bonds_.find_by_address(link.target);
  const bool fallback =
      bond && !patched() && plaintext_fallback_.contains(bond->peer_identity);
  if (bond && !fallback) {
    link.securing = true;
    medium_.start_encryption(*link.id);
    return;
  }
  discover(link);
}

void MobileHost::discover(PeerLink& link) {
  if (link.discovered) {
    pump(link);
    return;
  }
  medium_.send_att(*link.id, device_,
                   att::make_find_information_request(0x0001, 0xFFFF));
}

void MobileHost::drop_link(const DeviceAddress& target) {
  auto it = links_.find(target);
  if (it == links_.end()) return;
  if (it->second.id) by_connection_.erase(*it->second.id);
  links_.erase(it);
}

void MobileHost::on_disconnected(ll::ConnectionId id,
                                 ll::DisconnectReason reason) {
  PeerLink* link = link_by_id(id);
  if (!link) return;
  AppEvent e;
  e.kind = AppEvent::Kind::kDisconnected;
  e.peer = link->target;
  e.code = hci_code(reason);
  e.reason = std::string(ll::to_string(reason));
  if (link->pairing) {
    AppEvent bond;
    bond.kind = AppEvent::Kind::kBondStateChanged;
    bond.peer = link->target;
    bond.bond_state = BondState::kNone;
    for (const AppId& app : link->pairing_apps) emit(app, bond);
  }
  emit_all(*link, e);
  drop_link(link->target);
}

// ---------------------------------------------------------------------------
// GATT client.

void MobileHost::pump(PeerLink& link) {
  if (!link.id || !link.discovered || link.securing || link.suspended ||
      link.pairing || link.in_flight || link.ops.empty()) {
    return;
  }
  GattOp op = std::move(link.ops.front());
  link.ops.pop_front();
  auto handle = link.handles.find(op.uuid);
  uint16_t target_handle = 0;
  if (handle != link.handles.end()) {
    target_handle = handle->second;
    if (op.kind == GattOp::Kind::kSubscribe) {
      auto next = link.uuids.find(static_cast<uint16_t>(target_handle + 1));
      if (next == link.uuids.end() ||
          next->second != att::kCccdUuid) {
        target_handle = 0;
      } else {
        target_handle = next->first;
      }
    }
  }
  link.in_flight = std::move(op);
  if (target_handle == 0) {
    finish_op(link, att::ErrorCode::kAttributeNotFound, {});
    return;
  }
  if (link.in_flight->kind == GattOp::Kind::kRead) {
    medium_.send_att(*link.id, device_, att::make_read_request(target_handle));
  } else {
    medium_.send_att(*link.id, device_,
                     att::make_write_request(target_handle,
                                             link.in_flight->value));
  }
}

void MobileHost::finish_op(PeerLink& link,
                           std::optional<att::ErrorCode> status, Bytes value) {
  if (!link.in_flight) return;
  GattOp op = std::move(*link.in_flight);
  link.in_flight.reset();
  AppEvent e;
  e.kind = AppEvent::Kind::kGattResult;
  e.peer = link.target;
  e.uuid = op.uuid;
  e.status = status;
  e.value = std::move(value);
  emit(op.app, e);
  if (status == att::ErrorCode::kInsufficientAuthentication) {
    on_insufficient_authentication(link, op.app);
  }
  // The handler above may have torn the link down.
  auto it = links_.find(e.peer);
  if (it != links_.end()) pump(it->second);
}

void MobileHost::on_att(ll::ConnectionId id, const att::Pdu& pdu) {
  PeerLink* link = link_by_id(id);
  if (!link) return;
  switch (pdu.opcode) {
    case att::Opcode::kFindInformationResponse: {
      auto entries = att::parse_find_information_response(pdu);
      if (!entries || link->discovered) return;
      for (const att::HandleUuid& entry : *entries) {
        link->uuids[entry.handle] = entry.uuid;
        // Characteristic values are looked up by their first occurrence.
        link->handles.try_emplace(entry.uuid, entry.handle);
      }
      link->discovered = true;
      if (!link->announced) {
        link->announced = true;
        AppEvent e;
        e.kind = AppEvent::Kind::kConnected;
        e.peer = link->target;
        emit_all(*link, e);
      }
      if (link->pairing && !medium_.pairing_active(id)) {
        begin_pairing(*link, link->pairing_apps, link->mitm);
        return;
      }
      pump(*link);
      return;
    }
    case att::Opcode::kReadResponse:
      finish_op(*link, std::nullopt, pdu.payload);
      return;
    case att::Opcode::kWriteResponse:
      finish_op(*link, std::nullopt, {});
      return;
    case att::Opcode::kErrorResponse: {
      auto error = att::parse_error_response(pdu);
      if (!error) return;
      if (error->request == att::Opcode::kFindInformationRequest) {
        link->discovered = true;
        pump(*link);
        return;
      }
      finish_op(*link, error->code, {});
      return;
    }
    case att::Opcode::kHandleValueNotification: {
      auto hv = att::parse_handle_value(pdu);
      if (!hv) return;
      AppEvent e;
      e.kind = AppEvent::Kind::kNotification;
      e.peer = link->target;
      auto uuid = link->uuids.find(hv->handle);
      if (uuid != link->uuids.end()) e.uuid = uuid->second;
      e.value = hv->value;
      emit_all(*link, e);
      return;
    }
    default:
      return;
  }
}

// ---------------------------------------------------------------------------
// Security.

void MobileHost::on_insufficient_authentication(PeerLink& link,
                                                const AppId& app) {
  if (link.pairing || medium_.pairing_active(*link.id)) return;
  if (!patched()) {
    // The stock stack pairs on the app's behalf and tells no one.
    begin_pairing(link, {app}, false);
    return;
  }
  if (!ask_user(Prompt::Kind::kPairForAccess, link,
                "pair to access protected data?")) {
    return;
  }
  bool mitm = true;
  if (auto required = required_method(link)) {
    mitm = is_authenticated(*required);
  }
  begin_pairing(link, {app}, mitm);
}

void MobileHost::on_encryption_changed(ll::ConnectionId id,
                                       ll::EncryptionResult result) {
  PeerLink* link = link_by_id(id);
  if (!link || link->pairing) return;
  link->securing = false;
  switch (result) {
    case ll::EncryptionResult::kEncrypted:
      discover(*link);
      return;
    case ll::EncryptionResult::kPinOrKeyMissing: {
      const Bond* bond = bonds_.find_by_address(link->target);
      if (!patched()) {
        // Silent downgrade; later connections to this peer skip encryption.
        if (bond) plaintext_fallback_.insert(bond->peer_identity);
        discover(*link);
        return;
      }
      AppEvent e;
      e.kind = AppEvent::Kind::kError;
      e.peer = link->target;
      e.code = kHciPinOrKeyMissing;
      e.reason = "peer lost the bond";
      emit_all(*link, e);
      link->suspended = true;
      if (!ask_user(Prompt::Kind::kRePair, *link,
                    "device lost pairing information; pair again?")) {
        medium_.disconnect(id, ll::DisconnectReason::kLocalHost);
        return;
      }
      link->suspended = false;
      bool mitm = true;
      if (auto required = required_method(*link)) {
        mitm = is_authenticated(*required);
      }
      begin_pairing(*link, link->apps, mitm);
      return;
    }
    case ll::EncryptionResult::kMicFailure: {
      AppEvent e;
      e.kind = AppEvent::Kind::kError;
      e.peer = link->target;
      e.code = kHciMicFailure;
      e.reason = "encryption failed";
      emit_all(*link, e);
      return;
    }
  }
}

void MobileHost::on_security_request(ll::ConnectionId id,
                                     const PairingFeatures& features) {
  PeerLink* link = link_by_id(id);
  if (!link || link->pairing || link->securing ||
      medium_.pairing_active(id)) {
    return;
  }
  const ll::Connection* c = medium_.connection(id);
  if (c && c->security.is_encrypted()) return;
  if (!patched()) {
    if (bonds_.find_by_address(link->target) &&
        !plaintext_fallback_.contains(
            bonds_.find_by_address(link->target)->peer_identity)) {
      link->securing = true;
      medium_.start_encryption(id);
      return;
    }
    begin_pairing(*link, link->apps, features.mitm);
    return;
  }
  if (!ask_user(Prompt::Kind::kPairingRequest, *link,
                "device requests pairing")) {
    return;
  }
  bool mitm = true;
  if (auto required = required_method(*link)) {
    mitm = is_authenticated(*required);
  }
  begin_pairing(*link, link->apps, mitm);
}

void MobileHost::begin_pairing(PeerLink& link, std::set<AppId> apps,
                               bool mitm) {
  link.pairing = true;
  link.mitm = mitm;
  link.pairing_apps = std::move(apps);
  link.pending_keys.reset();
  AppEvent e;
  e.kind = AppEvent::Kind::kBondStateChanged;
  e.peer = link.target;
  e.bond_state = BondState::kBonding;
  for (const AppId& app : link.pairing_apps) emit(app, e);
  medium_.start_pairing(*link.id);
}

std::optional<PairingMethod> MobileHost::required_method(
    const PeerLink& link) const {
  auto apps = device_apps_.find(link.target);
  if (apps == device_apps_.end()) return std::nullopt;
  return registry_.required(apps->second);
}

bool MobileHost::ask_user(Prompt::Kind kind, PeerLink& link,
                          std::string text) {
  Prompt prompt;
  prompt.time = medium_.scheduler().now();
  prompt.kind = kind;
  prompt.peer = link.target;
  prompt.text = std::move(text);
  prompt.consented = user_.intends_to_pair;
  AppEvent e;
  e.kind = AppEvent::Kind::kUserPromptRequired;
  e.peer = link.target;
  e.reason = prompt.text;
  prompts_.push_back(std::move(prompt));
  emit_all(link, e);
  return user_.intends_to_pair;
}

void MobileHost::warn(PeerLink& link, std::string text) {
  Prompt prompt;
  prompt.time = medium_.scheduler().now();
  prompt.kind = Prompt::Kind::kWarning;
  prompt.peer = link.target;
  prompt.text = std::move(text);
  prompts_.push_back(std::move(prompt));
}

std::optional<ll::LtkRecord> MobileHost::ltk_for(ll::ConnectionId id) {
  PeerLink* link = link_by_id(id);
  if (!link) return std::nullopt;
  if (link->pending_keys) {
    return ll::LtkRecord{link->pending_keys->ltk,
                           link->pending_keys->authenticated};
  }
  if (const Bond* bond = bonds_.find_by_address(link->target)) {
    return ll::LtkRecord{bond->ltk, bond->authenticated};
  }
  return std::nullopt;
}

smp::SessionConfig MobileHost::pairing_config(ll::ConnectionId id,
                                              smp::Role /*role*/) {
  smp::SessionConfig config;
  config.features.io = config_.io;
  config.features.sc = true;
  config.features.bonding = true;
  config.local_identity = smp::LocalIdentity{irk_, config_.identity};
  PeerLink* link = link_by_id(id);
  if (link) config.features.mitm = link->mitm;
  if (patched() && link) {
    if (auto required = required_method(*link)) {
      config.features.mitm = is_authenticated(*required);
      config.method_guard = [required = *required](
                                const Result<PairingMethod>& negotiated)
          -> std::optional<SecurityError> {
        if (!negotiated.ok() || *negotiated != required) {
          return SecurityError::kPairingAuthFail;
        }
        return std::nullopt;
      };
    }
  }
  return config;
}

const smp::UserAgent* MobileHost::user_agent(ll::ConnectionId /*id*/) {
  return &user_;
}

void MobileHost::on_pairing_event(ll::ConnectionId id,
                                  const ll::PairingEvent& event) {
  PeerLink* link = link_by_id(id);
  if (!link) return;
  using Kind = ll::PairingEvent::Kind;
  AppEvent e;
  e.peer = link->target;
  switch (event.kind) {
    case Kind::kMethodNegotiated:
      if (!patched()) return;
      e.kind = AppEvent::Kind::kMethodNegotiated;
      e.method = event.method;
      emit_all(*link, e);
      return;
    case Kind::kConfirmRequested:
      e.kind = AppEvent::Kind::kPairingVariantObserved;
      e.variant = PairingVariant::kPasskeyConfirmation;
      emit_all(*link, e);
      return;
    case Kind::kPasskeyDisplayed:
    case Kind::kPasskeyRequested:
      e.kind = AppEvent::Kind::kPairingVariantObserved;
      e.variant = PairingVariant::kPin;
      emit_all(*link, e);
      return;
    case Kind::kAuth2Done:
      link->pending_keys = event.keys;
      return;
    case Kind::kKeysDistributed: {
      const KeySet keys = event.keys ? *event.keys : KeySet{};
      Bond bond;
      bond.peer_identity =
          event.peer_identity ? event.peer_identity->identity : link->target;
      if (event.peer_identity) bond.peer_irk = event.peer_identity->irk;
      bond.ltk = keys.ltk;
      bond.authenticated = keys.authenticated;
      bond.owner_apps = link->pairing_apps;
      if (bond.owner_apps.empty()) bond.owner_apps = link->apps;
      plaintext_fallback_.erase(bond.peer_identity);
      bonds_.put(bond);
      link->pairing = false;
      link->pending_keys.reset();
      e.kind = AppEvent::Kind::kBondStateChanged;
      e.bond_state = BondState::kBonded;
      e.method = event.method;
      for (const AppId& app : link->pairing_apps) emit(app, e);
      link->pairing_apps.clear();
      discover(*link);
      return;
    }
    case Kind::kFailed:
    case Kind::kTimeout: {
      link->pairing = false;
      link->pending_keys.reset();
      e.kind = AppEvent::Kind::kBondStateChanged;
      e.bond_state = BondState::kNone;
      e.method = event.method;
      if (event.error) {
        e.code = wire_value(*event.error);
        e.reason = std::string(to_string(*event.error));
      } else {
        e.reason = "timeout";
      }
      for (const AppId& app : link->pairing_apps) emit(app, e);
      link->pairing_apps.clear();
      if (patched()) {
        warn(*link, "pairing failed: " + e.reason);
        AppEvent err;
        err.kind = AppEvent::Kind::kError;
        err.peer = link->target;
        err.code = kHciAuthenticationFailure;
        err.reason = e.reason;
        emit_all(*link, err);
        // Let Pairing Failed reach the peer before the link goes down.
        medium_.scheduler().schedule(2 * ll::kHopDelay, [this, id] {
          const ll::Connection* c = medium_.connection(id);
          if (c && c->alive) {
            medium_.disconnect(id, ll::DisconnectReason::kLocalHost);
          }
        });
        return;
      }
      if (link->discovered) pump(*link);
      return;
    }
  }
}

void MobileHost::emit(const AppId& app, AppEvent event) {
  event.time = medium_.scheduler().now();
  events_[app].push_back(std::move(event));
}

void MobileHost::emit_all(const PeerLink& link, const AppEvent& event) {
  for (const AppId& app : link.apps) emit(app, event);
}

}  // namespace scosim::host
