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

#include "scosim/peripherals/attackers.hpp"

#include <cstdio>

#include "scosim/crypto.hpp"

namespace scosim::peripherals {

std::string six_digits(uint32_t value) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%06u", value);
  return buf;
}

FakeMobile::FakeMobile(link::Medium& medium, FakeMobileOptions options)
    : medium_(medium), options_(std::move(options)) {
  device_ = medium_.attach(*this);
  user_.behavior = smp::UserBehavior::kAttackerControlled;
  user_.attacker_confirm = [](uint32_t) { return true; };
}

void FakeMobile::assume_identity(const DeviceAddress& identity,
                                 std::optional<crypto::Irk> irk) {
  options_.identity = identity;
  irk_ = irk;
}

void FakeMobile::connect(const DeviceAddress& target) {
  if (connected()) return;
  id_.reset();
  connect_error_.reset();
  discovered_ = false;
  handles_.clear();
  uuids_.clear();
  const DeviceAddress own =
      irk_ ? crypto::rpa_generate(*irk_, medium_.scheduler().rng())
           : options_.identity;
  addresses_used_.push_back(own);
  medium_.connect(device_, own, target, [this](const link::ConnectResult& r) {
    if (!r.connection) {
      connect_error_ = r.error;
      return;
    }
    id_ = r.connection;
    medium_.send_att(*id_, device_,
                     att::make_find_information_request(0x0001, 0xFFFF));
  });
}

void FakeMobile::disconnect() {
  if (connected()) {
    medium_.disconnect(*id_, link::DisconnectReason::kLocalHost);
  }
}

void FakeMobile::pair() {
  if (!connected() || pairing_) return;
  pairing_ = true;
  medium_.start_pairing(*id_);
}

void FakeMobile::read(const att::Uuid& uuid) {
  ops_.push_back({Op::Kind::kRead, uuid, {}});
  pump();
}

void FakeMobile::write(const att::Uuid& uuid, BytesView value) {
  ops_.push_back({Op::Kind::kWrite, uuid, Bytes(value.begin(), value.end())});
  pump();
}

void FakeMobile::subscribe(const att::Uuid& uuid) {
  ops_.push_back({Op::Kind::kSubscribe, uuid, {0x01, 0x00}});
  pump();
}

bool FakeMobile::connected() const {
  if (!id_) return false;
  const link::Connection* c = medium_.connection(*id_);
  return c && c->alive;
}

std::optional<att::LinkSecurityState> FakeMobile::security() const {
  if (!connected()) return std::nullopt;
  return medium_.connection(*id_)->security;
}

std::optional<uint32_t> FakeMobile::displayed_value() const {
  if (!id_) return std::nullopt;
  return medium_.displayed_value(*id_, device_);
}

bool FakeMobile::awaiting_passkey() const {
  return id_ && medium_.awaiting_passkey(*id_, device_);
}

std::string FakeMobile::received_text(const att::Uuid& uuid) const {
  std::string out;
  for (const auto& n : notifications_) {
    if (n.uuid == uuid) out.append(n.value.begin(), n.value.end());
  }
  return out;
}

void FakeMobile::pump() {
  if (!connected() || !discovered_ || pairing_ || in_flight_ ||
      ops_.empty()) {
    return;
  }
  in_flight_ = std::move(ops_.front());
  ops_.pop_front();
  uint16_t handle = 0;
  if (auto it = handles_.find(in_flight_->uuid); it != handles_.end()) {
    handle = it->second;
    if (in_flight_->kind == Op::Kind::kSubscribe) {
      auto next = uuids_.find(static_cast<uint16_t>(handle + 1));
      handle = (next != uuids_.end() && next->second == att::kCccdUuid)
                   ? next->first
                   : 0;
    }
  }
  if (handle == 0) {
    finish(att::ErrorCode::kAttributeNotFound, {});
    return;
  }
  if (in_flight_->kind == Op::Kind::kRead) {
    medium_.send_att(*id_, device_, att::make_read_request(handle));
  } else {
    medium_.send_att(*id_, device_,
                     att::make_write_request(handle, in_flight_->value));
  }
}

void FakeMobile::finish(std::optional<att::ErrorCode> status, Bytes value) {
  if (!in_flight_) return;
  results_.push_back({medium_.scheduler().now(), in_flight_->uuid, status,
                      std::move(value)});
  in_flight_.reset();
  pump();
}

std::optional<link::LtkRecord> FakeMobile::ltk_for(link::ConnectionId) {
  return ltk_;
}

void FakeMobile::on_disconnected(link::ConnectionId id,
                                 link::DisconnectReason) {
  if (id_ != id) return;
  pairing_ = false;
  in_flight_.reset();
  ops_.clear();
}

void FakeMobile::on_att(link::ConnectionId id, const att::Pdu& pdu) {
  if (id_ != id) return;
  switch (pdu.opcode) {
    case att::Opcode::kFindInformationResponse:
      if (auto entries = att::parse_find_information_response(pdu)) {
        for (const auto& e : *entries) {
          uuids_[e.handle] = e.uuid;
          handles_.try_emplace(e.uuid, e.handle);
        }
      }
      discovered_ = true;
      pump();
      return;
    case att::Opcode::kReadResponse:
      finish(std::nullopt, pdu.payload);
      return;
    case att::Opcode::kWriteResponse:
      finish(std::nullopt, {});
      return;
    case att::Opcode::kErrorResponse:
      if (auto e = att::parse_error_response(pdu)) {
        if (e->request == att::Opcode::kFindInformationRequest) {
          discovered_ = true;
          pump();
          return;
        }
        finish(e->code, {});
      }
      return;
    case att::Opcode::kHandleValueNotification:
      if (auto hv = att::parse_handle_value(pdu)) {
        GattRecord n;
        n.time = medium_.scheduler().now();
        if (auto it = uuids_.find(hv->handle); it != uuids_.end()) {
          n.uuid = it->second;
        }
        n.value = hv->value;
        notifications_.push_back(n);
        if (on_notification) on_notification(n.uuid, n.value);
      }
      return;
    default:
      return;
  }
}

void FakeMobile::on_encryption_changed(link::ConnectionId,
                                       link::EncryptionResult) {}

smp::SessionConfig FakeMobile::pairing_config(link::ConnectionId,
                                              smp::Role) {
  smp::SessionConfig config;
  config.features.io = options_.io;
  config.features.mitm = options_.mitm;
  config.permissive = true;
  if (irk_) config.local_identity = smp::LocalIdentity{*irk_, options_.identity};
  return config;
}

const smp::UserAgent* FakeMobile::user_agent(link::ConnectionId) {
  return &user_;
}

void FakeMobile::on_pairing_event(link::ConnectionId id,
                                  const link::PairingEvent& event) {
  if (id_ != id) return;
  using Kind = link::PairingEvent::Kind;
  switch (event.kind) {
    case Kind::kAuth2Done:
      if (event.keys) {
        ltk_ = link::LtkRecord{event.keys->ltk, event.keys->authenticated};
      }
      return;
    case Kind::kKeysDistributed:
      pairing_ = false;
      paired_ = true;
      method_ = event.method;
      pump();
      return;
    case Kind::kFailed:
    case Kind::kTimeout:
      pairing_ = false;
      error_ = event.error;
      pump();
      return;
    default:
      return;
  }
}

Blocker::Blocker(link::Medium& medium, std::string label)
    : medium_(medium), label_(std::move(label)) {
  device_ = medium_.attach(*this);
}

void Blocker::block(const DeviceAddress& target, size_t count) {
  for (size_t i = 0; i < count; ++i) {
    medium_.connect(device_, DeviceAddress::public_identity(next_address_++),
                    target, [this](const link::ConnectResult& r) {
                      if (r.connection) held_.push_back(*r.connection);
                    });
  }
}

void Blocker::release() {
  const auto held = held_;
  for (link::ConnectionId id : held) {
    medium_.disconnect(id, link::DisconnectReason::kLocalHost);
  }
  held_.clear();
}

void Blocker::on_disconnected(link::ConnectionId id, link::DisconnectReason) {
  std::erase(held_, id);
}

std::vector<std::string> SnifferTap::plaintext_values() const {
  std::vector<std::string> out;
  for (const auto& hv : log_.plaintext_att_values()) {
    out.emplace_back(hv.value.begin(), hv.value.end());
  }
  return out;
}

std::vector<BpReading> SnifferTap::readings() const {
  std::vector<BpReading> out;
  for (const auto& text : plaintext_values()) {
    if (auto r = BpReading::parse(text)) out.push_back(*r);
  }
  return out;
}

bool SnifferTap::saw_plaintext(std::string_view text) const {
  for (const auto& v : plaintext_values()) {
    if (v.find(text) != std::string::npos) return true;
  }
  return false;
}

size_t SnifferTap::encrypted_frames() const {
  size_t n = 0;
  for (const auto& r : log_.records()) n += r.encrypted ? 1 : 0;
  return n;
}

}  // namespace scosim::peripherals
