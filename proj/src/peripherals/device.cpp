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

#include "scosim/peripherals/device.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>

#include "scosim/att/profile.hpp"
#include "scosim/crypto.hpp"

namespace scosim::peripherals {

std::string BpReading::to_text() const {
  return "sys=" + std::to_string(systolic) + ";dia=" +
         std::to_string(diastolic) + ";pul=" + std::to_string(pulse);
}

std::optional<BpReading> BpReading::parse(std::string_view text) {
  BpReading r;
  int matched = std::sscanf(std::string(text).c_str(), "sys=%d;dia=%d;pul=%d",
                            &r.systolic, &r.diastolic, &r.pulse);
  if (matched != 3) return std::nullopt;
  return r;
}

Peripheral::Peripheral(link::Medium& medium, DeviceProfile profile)
    : medium_(medium),
      profile_(std::move(profile)),
      server_(profile_.services) {
  device_ = medium_.attach(*this);
  user_.behavior = smp::UserBehavior::kAbsent;
}

void Peripheral::start_advertising() {
  start_advertising(profile_.adv_frequency_hz);
}

void Peripheral::start_advertising(double frequency_hz) {
  link::Advertisement ad;
  ad.address = profile_.identity;
  ad.name = profile_.name;
  for (const auto& s : profile_.services) ad.services.push_back(s.uuid);
  ad.frequency_hz = frequency_hz;
  medium_.advertise(device_, ad);
}

void Peripheral::stop_advertising() { medium_.stop_advertising(device_); }

void Peripheral::power_off() {
  stop_advertising();
  for (link::ConnectionId id : connections()) {
    medium_.disconnect(id, link::DisconnectReason::kRemoteUser);
  }
}

const PeerBond* Peripheral::bond_for(const DeviceAddress& on_air) const {
  for (const PeerBond& b : bonds_) {
    if (b.identity == on_air) return &b;
    if (on_air.is_rpa() && b.irk && crypto::rpa_resolve(*b.irk, on_air)) {
      return &b;
    }
  }
  return nullptr;
}

std::vector<link::ConnectionId> Peripheral::connections() const {
  std::vector<link::ConnectionId> out;
  for (link::ConnectionId id : live_) {
    const link::Connection* c = medium_.connection(id);
    if (c && c->alive) out.push_back(id);
  }
  return out;
}

std::optional<uint32_t> Peripheral::displayed_value() const {
  for (link::ConnectionId id : connections()) {
    if (auto v = medium_.displayed_value(id, device_)) return v;
  }
  return std::nullopt;
}

bool Peripheral::awaiting_passkey() const {
  for (link::ConnectionId id : connections()) {
    if (medium_.awaiting_passkey(id, device_)) return true;
  }
  return false;
}

size_t Peripheral::notify(const att::Uuid& uuid, BytesView value) {
  auto handle = server_.find_by_uuid(uuid);
  if (!handle) return 0;
  server_.set_value(*handle, value);
  const att::Attribute* attr = server_.find(*handle);
  size_t sent = 0;
  for (link::ConnectionId id : connections()) {
    auto subs = subscriptions_.find(id);
    if (subs == subscriptions_.end() || !subs->second.contains(*handle)) {
      continue;
    }
    const link::Connection* c = medium_.connection(id);
    if (att::check_permission(*attr, c->security)) continue;
    medium_.send_att(id, device_, att::make_notification(*handle, value));
    ++sent;
  }
  return sent;
}

size_t Peripheral::publish_reading(const BpReading& reading) {
  return notify(kBpMeasurementUuid, to_bytes(reading.to_text()));
}

void Peripheral::type_text(std::string_view text) {
  for (link::ConnectionId id : connections()) {
    if (!medium_.awaiting_passkey(id, device_)) continue;
    uint32_t passkey = 0;
    auto [end, ec] =
        std::from_chars(text.data(), text.data() + text.size(), passkey);
    if (ec == std::errc() && end == text.data() + text.size()) {
      medium_.enter_passkey(id, device_, passkey);
    }
    return;
  }
  for (char ch : text) {
    const uint8_t key = static_cast<uint8_t>(ch);
    notify(kKeystrokeUuid, BytesView(&key, 1));
  }
}

DeviceAddress Peripheral::master_address(link::ConnectionId id) const {
  return medium_.peer_address(id, device_);
}

std::vector<link::KnownIdentity> Peripheral::whitelist() const {
  std::vector<link::KnownIdentity> list = profile_.whitelist_entries;
  for (const PeerBond& b : bonds_) {
    list.push_back({b.irk.value_or(crypto::Irk{}), b.identity});
  }
  return list;
}

bool Peripheral::accept_connection(const DeviceAddress& master) {
  if (!profile_.whitelist || pairing_mode_) return true;
  const auto list = whitelist();
  if (list.empty()) return true;
  for (const auto& entry : list) {
    if (entry.identity == master) return true;
    if (master.is_rpa() && crypto::rpa_resolve(entry.irk, master)) {
      return true;
    }
  }
  ++rejected_;
  return false;
}

std::optional<link::LtkRecord> Peripheral::ltk_for(link::ConnectionId id) {
  if (auto it = pending_.find(id); it != pending_.end()) return it->second;
  if (const PeerBond* b = bond_for(master_address(id))) {
    return link::LtkRecord{b->ltk, b->authenticated};
  }
  return std::nullopt;
}

void Peripheral::on_connected(link::ConnectionId id) { live_.insert(id); }

void Peripheral::on_disconnected(link::ConnectionId id,
                                 link::DisconnectReason /*reason*/) {
  live_.erase(id);
  pending_.erase(id);
  subscriptions_.erase(id);
  password_ok_.erase(id);
}

void Peripheral::on_att(link::ConnectionId id, const att::Pdu& pdu) {
  const link::Connection* c = medium_.connection(id);
  if (!c || !c->alive) return;
  const att::LinkSecurityState security = c->security;
  auto response = server_.handle_request(pdu, security);
  if (response) medium_.send_att(id, device_, *response);
  if (pdu.opcode != att::Opcode::kWriteRequest || !response ||
      response->opcode != att::Opcode::kWriteResponse) {
    return;
  }
  auto hv = att::parse_handle_value(pdu);
  const att::Attribute* attr = hv ? server_.find(hv->handle) : nullptr;
  if (!attr) return;
  if (attr->uuid == att::kCccdUuid) {
    const uint16_t value_handle = static_cast<uint16_t>(hv->handle - 1);
    if (!hv->value.empty() && (hv->value[0] & 0x01)) {
      subscriptions_[id].insert(value_handle);
    } else {
      subscriptions_[id].erase(value_handle);
    }
    return;
  }
  writes_.push_back({medium_.scheduler().now(), master_address(id),
                     attr->uuid, hv->value, security.is_encrypted()});
  after_write(id, attr->uuid, hv->value);
}

void Peripheral::after_write(link::ConnectionId id, const att::Uuid& uuid,
                             const Bytes& value) {
  if (profile_.behavior != Behavior::kSmartLight) return;
  const std::string text(value.begin(), value.end());
  if (uuid == kLightPasswordUuid) {
    if (!profile_.password.empty() && text == profile_.password) {
      password_ok_.insert(id);
    }
    return;
  }
  if (uuid != kLightCommandUuid) return;
  if (!password_ok_.contains(id)) {
    rejected_commands_.push_back(text);
    return;
  }
  accepted_commands_.push_back(text);
  light_state_ = text;
  if (auto state = server_.find_by_uuid(kLightStateUuid)) {
    server_.set_value(*state, value);
  }
}

smp::SessionConfig Peripheral::pairing_config(link::ConnectionId /*id*/,
                                              smp::Role /*role*/) {
  smp::SessionConfig config;
  config.features = profile_.features;
  config.sc_only = profile_.sc_only;
  return config;
}

const smp::UserAgent* Peripheral::user_agent(link::ConnectionId /*id*/) {
  return &user_;
}

void Peripheral::on_pairing_event(link::ConnectionId id,
                                  const link::PairingEvent& event) {
  using Kind = link::PairingEvent::Kind;
  const DeviceAddress master = master_address(id);
  switch (event.kind) {
    case Kind::kAuth2Done: {
      if (!event.keys) return;
      link::LtkRecord record{event.keys->ltk, event.keys->authenticated};
      if (profile_.ltk_property_caching) {
        if (const PeerBond* prev = bond_for(master)) {
          record.authenticated = prev->authenticated;
        }
      }
      pending_[id] = record;
      return;
    }
    case Kind::kKeysDistributed: {
      PeerBond bond;
      bond.identity = master;
      if (event.peer_identity) {
        bond.identity = event.peer_identity->identity;
        bond.irk = event.peer_identity->irk;
        identities_.push_back(*event.peer_identity);
      }
      const link::LtkRecord record = pending_.count(id)
                                         ? pending_[id]
                                         : link::LtkRecord{};
      bond.ltk = record.ltk;
      bond.authenticated = record.authenticated;
      // Replace any bond for the same master.
      std::erase_if(bonds_, [&](const PeerBond& b) {
        return b.identity == bond.identity ||
               (master.is_rpa() && b.irk && crypto::rpa_resolve(*b.irk, master));
      });
      bonds_.push_back(bond);
      pending_.erase(id);
      pairings_.push_back({medium_.scheduler().now(), master, event.method,
                           std::nullopt, bond.authenticated});
      return;
    }
    case Kind::kFailed:
    case Kind::kTimeout:
      pending_.erase(id);
      pairings_.push_back({medium_.scheduler().now(), master, event.method,
                           event.error, false});
      return;
    default:
      return;
  }
}

DeviceProfile clone_profile(const DeviceProfile& victim,
                            const FakeOptions& options) {
  DeviceProfile fake = victim;
  fake.features.io = options.io;
  fake.features.mitm = options.mitm;
  fake.features.oob = false;
  fake.sc_only = {};
  fake.whitelist = false;
  fake.whitelist_entries.clear();
  fake.ltk_property_caching = false;
  fake.adv_frequency_hz = options.adv_frequency_hz;
  fake.password.clear();
  fake.services = att::with_permission(victim.services, options.permission);
  return fake;
}

FakeDevice::FakeDevice(link::Medium& medium, const DeviceProfile& victim,
                       const FakeOptions& options)
    : Peripheral(medium, clone_profile(victim, options)) {
  user_.behavior = smp::UserBehavior::kAttackerControlled;
  user_.attacker_confirm = [](uint32_t) { return true; };
  user_.passkey_source = [this]() { return relayed_passkey_; };
}

std::optional<smp::ReceivedIdentity> FakeDevice::stolen_identity() const {
  if (identities_.empty()) return std::nullopt;
  return identities_.back();
}

std::vector<std::string> FakeDevice::captured_text(
    const att::Uuid& uuid) const {
  std::vector<std::string> out;
  for (const auto& w : writes_) {
    if (w.uuid == uuid) out.emplace_back(w.value.begin(), w.value.end());
  }
  return out;
}

void FakeDevice::relay_input(std::string_view text) {
  if (awaiting_passkey()) {
    for (char ch : text) {
      if (std::isdigit(static_cast<unsigned char>(ch))) digits_.push_back(ch);
    }
    if (digits_.size() >= 6) {
      uint32_t passkey = 0;
      std::from_chars(digits_.data(), digits_.data() + 6, passkey);
      digits_.erase(0, 6);
      relayed_passkey_ = passkey;
      for (link::ConnectionId id : connections()) {
        if (medium_.awaiting_passkey(id, device_)) {
          medium_.enter_passkey(id, device_, passkey);
        }
      }
    }
    return;
  }
  for (char ch : text) {
    const uint8_t key = static_cast<uint8_t>(ch);
    notify(kKeystrokeUuid, BytesView(&key, 1));
  }
}

smp::SessionConfig FakeDevice::pairing_config(link::ConnectionId id,
                                              smp::Role role) {
  smp::SessionConfig config = Peripheral::pairing_config(id, role);
  config.permissive = true;
  return config;
}

}  // namespace scosim::peripherals
