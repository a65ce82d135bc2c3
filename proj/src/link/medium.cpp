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

#include "scosim/link/medium.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pairing_run.hpp"

namespace scosim::link {

namespace {

constexpr uint8_t kLlTerminateInd = 0x02;
constexpr uint8_t kLlEncReq = 0x03;
constexpr uint8_t kLlEncRsp = 0x04;
constexpr uint8_t kLlStartEncReq = 0x05;
constexpr uint8_t kLlStartEncRsp = 0x06;
constexpr uint8_t kLlRejectInd = 0x0D;

constexpr uint8_t kAdCompleteName = 0x09;
constexpr uint8_t kAdServiceUuids128 = 0x07;

void put64(Bytes& out, uint64_t v) {
  for (int i = 7; i >= 0; --i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

uint64_t get64(const Bytes& in, size_t at) {
  uint64_t v = 0;
  for (size_t i = 0; i < 8; ++i) v = v << 8 | in[at + i];
  return v;
}

Bytes advertising_data(const Advertisement& ad) {
  Bytes out;
  out.push_back(static_cast<uint8_t>(ad.name.size() + 1));
  out.push_back(kAdCompleteName);
  append(out, to_bytes(ad.name));
  if (!ad.services.empty()) {
    out.push_back(static_cast<uint8_t>(16 * ad.services.size() + 1));
    out.push_back(kAdServiceUuids128);
    for (const auto& u : ad.services) {
      out.insert(out.end(), u.bytes.rbegin(), u.bytes.rend());
    }
  }
  return out;
}

std::string ll_name(uint8_t opcode) {
  switch (opcode) {
    case kLlTerminateInd:
      return "LL_TERMINATE_IND";
    case kLlEncReq:
      return "LL_ENC_REQ";
    case kLlEncRsp:
      return "LL_ENC_RSP";
    case kLlStartEncReq:
      return "LL_START_ENC_REQ";
    case kLlStartEncRsp:
      return "LL_START_ENC_RSP";
    case kLlRejectInd:
      return "LL_REJECT_IND";
  }
  return "LL_UNKNOWN";
}

}  // namespace

std::string_view to_string(ConnectError error) {
  switch (error) {
    case ConnectError::kNotFound:
      return "NotFound";
    case ConnectError::kBusy:
      return "Busy";
    case ConnectError::kRejected:
      return "Rejected";
  }
  return "?";
}

std::string_view to_string(DisconnectReason reason) {
  switch (reason) {
    case DisconnectReason::kLocalHost:
      return "LocalHost";
    case DisconnectReason::kRemoteUser:
      return "RemoteUser";
    case DisconnectReason::kMicFailure:
      return "MicFailure";
  }
  return "?";
}

std::string_view to_string(EncryptionResult result) {
  switch (result) {
    case EncryptionResult::kEncrypted:
      return "Encrypted";
    case EncryptionResult::kPinOrKeyMissing:
      return "PinOrKeyMissing";
    case EncryptionResult::kMicFailure:
      return "MicFailure";
  }
  return "?";
}

std::string_view to_string(PairingEvent::Kind kind) {
  using Kind = PairingEvent::Kind;
  switch (kind) {
    case Kind::kMethodNegotiated:
      return "MethodNegotiated";
    case Kind::kConfirmRequested:
      return "ConfirmRequested";
    case Kind::kPasskeyDisplayed:
      return "PasskeyDisplayed";
    case Kind::kPasskeyRequested:
      return "PasskeyRequested";
    case Kind::kAuth2Done:
      return "Auth2Done";
    case Kind::kKeysDistributed:
      return "KeysDistributed";
    case Kind::kFailed:
      return "Failed";
    case Kind::kTimeout:
      return "Timeout";
  }
  return "?";
}

std::string TraceLine::to_line() const {
  char t[24];
  std::snprintf(t, sizeof(t), "%012llu", static_cast<unsigned long long>(time));
  return std::string(t) + " " + source + " -> " + destination + " " + text;
}

Medium::Medium(Scheduler& scheduler) : scheduler_(scheduler) {
  scheduler_.add_invariant([this] { check_slots(); });
}

Medium::~Medium() = default;

DeviceId Medium::attach(LinkAgent& agent) {
  agents_.push_back(&agent);
  return static_cast<DeviceId>(agents_.size() - 1);
}

void Medium::advertise(DeviceId device, Advertisement ad) {
  if (!(ad.frequency_hz > 0.0) || ad.frequency_hz > kMaxAdvertisingHz) {
    throw std::invalid_argument("advertising frequency must be in (0, 50] Hz");
  }
  sniffer_.record(SnifferRecord{scheduler_.now(), ad.address.to_string(),
                                "broadcast", false, advertising_data(ad)});
  ++delivered_;
  advertisers_[device] = Advertiser{std::move(ad), true};
}

void Medium::stop_advertising(DeviceId device) {
  auto it = advertisers_.find(device);
  if (it != advertisers_.end()) it->second.active = false;
}

bool Medium::advertising(DeviceId device) const {
  auto it = advertisers_.find(device);
  return it != advertisers_.end() && it->second.active;
}

bool Medium::has_free_slot(DeviceId device) const {
  return live_slave_connections(device) < agents_[device]->slot_limit();
}

std::vector<ScanResult> Medium::scan(Time window) {
  std::vector<std::pair<std::pair<Time, DeviceId>, ScanResult>> events;
  for (const auto& [id, adv] : advertisers_) {
    if (!adv.active || !has_free_slot(id)) continue;
    const double period = 1e6 / adv.ad.frequency_hz;
    const double phase = scheduler_.rng().unit() * period;
    for (double t = phase; t < static_cast<double>(window); t += period) {
      const auto at = static_cast<Time>(t);
      events.push_back({{at, id},
                        ScanResult{scheduler_.now() + at, adv.ad.address,
                                   adv.ad.name, adv.ad.services}});
    }
  }
  std::sort(events.begin(), events.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<ScanResult> out;
  for (auto& e : events) out.push_back(std::move(e.second));
  return out;
}

void Medium::connect(DeviceId master, const DeviceAddress& own_address,
                     const DeviceAddress& target,
                     std::function<void(const ConnectResult&)> done) {
  bool any = false;
  std::optional<std::pair<double, DeviceId>> first;
  for (const auto& [id, adv] : advertisers_) {
    if (!adv.active || adv.ad.address != target || id == master) continue;
    any = true;
    if (!has_free_slot(id)) continue;
    const double delay = scheduler_.rng().unit() * 1e6 / adv.ad.frequency_hz;
    if (!first || delay < first->first) first = {delay, id};
  }
  if (!first) {
    ConnectResult r;
    r.error = any ? ConnectError::kBusy : ConnectError::kNotFound;
    scheduler_.schedule(kScanTimeout, [done, r] { done(r); });
    return;
  }
  const DeviceId slave = first->second;
  const auto wait = static_cast<Time>(std::llround(first->first)) + kConnectSetup;
  scheduler_.schedule(wait, [this, master, slave, own_address, target, done] {
    ConnectResult r;
    if (!advertising(slave) || !has_free_slot(slave)) {
      r.error = ConnectError::kBusy;
      done(r);
      return;
    }
    if (!agents_[slave]->accept_connection(own_address)) {
      r.error = ConnectError::kRejected;
      trace_.push_back(TraceLine{scheduler_.now(), own_address.to_string(),
                                 target.to_string(), "CONNECT rejected"});
      done(r);
      return;
    }
    Connection c;
    c.id = next_connection_++;
    c.master = master;
    c.slave = slave;
    c.master_address = own_address;
    c.slave_address = target;
    connections_[c.id] = c;
    trace_.push_back(TraceLine{scheduler_.now(),
                               agents_[master]->label() + "@" +
                                   own_address.to_string(),
                               agents_[slave]->label() + "@" +
                                   target.to_string(),
                               "CONNECT conn=" + std::to_string(c.id)});
    r.connection = c.id;
    r.peer = slave;
    agents_[slave]->on_connected(c.id);
    agents_[master]->on_connected(c.id);
    done(r);
  });
}

void Medium::disconnect(ConnectionId id, DisconnectReason reason) {
  auto it = connections_.find(id);
  if (it == connections_.end() || !it->second.alive) return;
  Connection& c = it->second;
  c.alive = false;
  c.encrypting = false;
  encryptions_.erase(id);
  if (auto run = pairings_.find(id); run != pairings_.end()) {
    run->second->halt();
    // The run may be on the call stack; free it once the stack unwinds.
    std::shared_ptr<PairingRun> doomed(std::move(run->second));
    pairings_.erase(run);
    scheduler_.schedule(0, [doomed] {});
  }
  trace_.push_back(TraceLine{scheduler_.now(), agents_[c.master]->label(),
                             agents_[c.slave]->label(),
                             "DISCONNECT reason=" +
                                 std::string(to_string(reason))});
  const DeviceId ends[2] = {c.slave, c.master};
  for (DeviceId d : ends) {
    scheduler_.schedule(0, [this, d, id, reason] {
      agents_[d]->on_disconnected(id, reason);
    });
  }
}

const Connection* Medium::connection(ConnectionId id) const {
  auto it = connections_.find(id);
  return it == connections_.end() ? nullptr : &it->second;
}

std::vector<ConnectionId> Medium::connections_of(DeviceId device) const {
  std::vector<ConnectionId> out;
  for (const auto& [id, c] : connections_) {
    if (c.alive && (c.master == device || c.slave == device)) out.push_back(id);
  }
  return out;
}

size_t Medium::live_slave_connections(DeviceId device) const {
  return std::count_if(connections_.begin(), connections_.end(),
                       [device](const auto& kv) {
                         return kv.second.alive && kv.second.slave == device;
                       });
}

DeviceId Medium::peer_of(ConnectionId id, DeviceId self) const {
  const Connection& c = connections_.at(id);
  return c.master == self ? c.slave : c.master;
}

DeviceAddress Medium::peer_address(ConnectionId id, DeviceId self) const {
  const Connection& c = connections_.at(id);
  return c.master == self ? c.slave_address : c.master_address;
}

void Medium::check_slots() const {
  for (DeviceId d = 0; d < agents_.size(); ++d) {
    if (live_slave_connections(d) > agents_[d]->slot_limit()) {
      throw std::logic_error("slave connection slots exceeded on " +
                             agents_[d]->label());
    }
  }
}

std::string Medium::address_label(const Connection& c, DeviceId device) const {
  return (device == c.master ? c.master_address : c.slave_address)
      .to_string();
}

void Medium::add_trace(const Connection& c, DeviceId from, DeviceId to,
                       std::string text) {
  trace_.push_back(TraceLine{scheduler_.now(), agents_[from]->label(),
                             agents_[to]->label(),
                             (c.security.is_encrypted() ? "[enc] " : "") +
                                 std::move(text)});
}

void Medium::send_frame(ConnectionId id, DeviceId from, Channel channel,
                        const Bytes& body, FrameMode mode) {
  auto it = connections_.find(id);
  if (it == connections_.end() || !it->second.alive) return;
  Connection& c = it->second;
  Frame f;
  f.connection = id;
  f.from = from;
  f.to = from == c.master ? c.slave : c.master;
  Bytes plain;
  plain.reserve(body.size() + 1);
  plain.push_back(static_cast<uint8_t>(channel));
  append(plain, body);
  f.encrypted = mode == FrameMode::kEncrypted ||
                (mode == FrameMode::kAuto && c.security.is_encrypted());
  if (f.encrypted) {
    const bool from_master = from == c.master;
    const auto dir = from_master ? crypto::Direction::kMasterToSlave
                                 : crypto::Direction::kSlaveToMaster;
    const auto& key = from_master ? c.master_key : c.slave_key;
    if (!key) throw std::logic_error("encrypting without a session key");
    f.counter = c.counter[from_master ? 0 : 1]++;
    f.data = crypto::session_encrypt(*key, f.counter, dir, plain);
  } else {
    f.data = std::move(plain);
  }
  scheduler_.schedule(kHopDelay, [this, f = std::move(f)]() mutable {
    deliver(std::move(f));
  });
}

void Medium::deliver(Frame frame) {
  auto it = connections_.find(frame.connection);
  if (it == connections_.end() || !it->second.alive) return;
  Connection& c = it->second;
  if (interceptor_) interceptor_(frame);
  sniffer_.record(SnifferRecord{scheduler_.now(), address_label(c, frame.from),
                                address_label(c, frame.to), frame.encrypted,
                                frame.data});
  ++delivered_;

  Bytes plain;
  if (frame.encrypted) {
    const bool to_master = frame.to == c.master;
    const auto dir = to_master ? crypto::Direction::kSlaveToMaster
                               : crypto::Direction::kMasterToSlave;
    const auto& key = to_master ? c.master_key : c.slave_key;
    auto result =
        crypto::session_decrypt(key, frame.counter, dir, frame.data);
    if (auto* error = std::get_if<crypto::DecryptError>(&result)) {
      (void)error;
      add_trace(c, frame.from, frame.to, "MIC failure");
      if (c.encrypting) {
        finish_encryption(c.id, EncryptionResult::kMicFailure);
      } else {
        disconnect(c.id, DisconnectReason::kMicFailure);
      }
      return;
    }
    plain = std::get<Bytes>(std::move(result));
  } else {
    plain = std::move(frame.data);
  }
  if (plain.empty()) return;
  const Bytes body(plain.begin() + 1, plain.end());
  switch (static_cast<Channel>(plain[0])) {
    case Channel::kLinkControl:
      on_link_control(c, frame.to, body);
      break;
    case Channel::kAtt:
      if (auto pdu = att::Pdu::decode(body)) {
        add_trace(c, frame.from, frame.to, "ATT " + att::describe(*pdu));
        agents_[frame.to]->on_att(c.id, *pdu);
      }
      break;
    case Channel::kSmp:
      on_smp(c, frame.to, body);
      break;
  }
}

void Medium::send_att(ConnectionId id, DeviceId from, const att::Pdu& pdu) {
  send_frame(id, from, Channel::kAtt, pdu.encode());
}

void Medium::send_security_request(ConnectionId id,
                                   const PairingFeatures& features) {
  const Connection* c = connection(id);
  if (!c || !c->alive) return;
  send_frame(id, c->slave, Channel::kSmp,
             smp::make_security_request(features).encode());
}

void Medium::on_smp(Connection& c, DeviceId to, const Bytes& body) {
  auto pdu = smp::Pdu::decode(body);
  if (!pdu) return;
  add_trace(c, c.master == to ? c.slave : c.master, to,
            "SMP " + smp::describe(*pdu));
  if (pdu->opcode == smp::Opcode::kSecurityRequest) {
    if (to != c.master) return;
    if (auto features = smp::parse_security_request(*pdu)) {
      agents_[to]->on_security_request(c.id, *features);
    }
    return;
  }
  auto run = pairings_.find(c.id);
  if (run != pairings_.end()) run->second->on_pdu(to, *pdu);
}

void Medium::start_encryption(ConnectionId id,
                              std::function<void(EncryptionResult)> done) {
  auto it = connections_.find(id);
  if (it == connections_.end() || !it->second.alive ||
      it->second.encrypting) {
    return;
  }
  Connection& c = it->second;
  auto ltk = agents_[c.master]->ltk_for(id);
  PendingEncryption pending;
  pending.done = std::move(done);
  c.encrypting = true;
  if (!ltk) {
    encryptions_[id] = std::move(pending);
    scheduler_.schedule(0, [this, id] {
      finish_encryption(id, EncryptionResult::kPinOrKeyMissing);
    });
    return;
  }
  // Encryption restarts from plaintext.
  c.security = att::LinkSecurityState::plaintext();
  c.master_key.reset();
  c.slave_key.reset();
  pending.master_ltk = *ltk;
  pending.master_skd = scheduler_.rng().next_u64();
  Bytes body = {kLlEncReq};
  put64(body, pending.master_skd);
  encryptions_[id] = std::move(pending);
  add_trace(c, c.master, c.slave, ll_name(kLlEncReq));
  send_frame(id, c.master, Channel::kLinkControl, body, FrameMode::kPlaintext);
}

void Medium::on_link_control(Connection& c, DeviceId to, const Bytes& body) {
  if (body.empty()) return;
  const uint8_t opcode = body[0];
  const bool at_master = to == c.master;
  auto pending = encryptions_.find(c.id);
  if (pending == encryptions_.end()) return;

  if (opcode == kLlEncReq && !at_master && body.size() == 9) {
    auto ltk = agents_[c.slave]->ltk_for(c.id);
    if (!ltk) {
      add_trace(c, c.slave, c.master, ll_name(kLlRejectInd) + " 0x06");
      send_frame(c.id, c.slave, Channel::kLinkControl,
                 Bytes{kLlRejectInd, wire_value(SecurityError::kPinOrKeyMissing)},
                 FrameMode::kPlaintext);
      return;
    }
    const uint64_t slave_skd = scheduler_.rng().next_u64();
    const uint64_t salt = get64(body, 1) ^ slave_skd;
    c.slave_key = crypto::derive_session_key(ltk->ltk, c.id, salt);
    pending->second.slave_authenticated = ltk->authenticated;
    Bytes rsp = {kLlEncRsp};
    put64(rsp, slave_skd);
    add_trace(c, c.slave, c.master, ll_name(kLlEncRsp));
    send_frame(c.id, c.slave, Channel::kLinkControl, rsp,
               FrameMode::kPlaintext);
    add_trace(c, c.slave, c.master, ll_name(kLlStartEncReq));
    send_frame(c.id, c.slave, Channel::kLinkControl, Bytes{kLlStartEncReq},
               FrameMode::kPlaintext);
    return;
  }
  if (opcode == kLlEncRsp && at_master && body.size() == 9) {
    const uint64_t salt = pending->second.master_skd ^ get64(body, 1);
    c.master_key =
        crypto::derive_session_key(pending->second.master_ltk.ltk, c.id, salt);
    return;
  }
  if (opcode == kLlStartEncReq && at_master) {
    send_frame(c.id, c.master, Channel::kLinkControl, Bytes{kLlStartEncRsp},
               FrameMode::kEncrypted);
    return;
  }
  if (opcode == kLlStartEncRsp && !at_master) {
    // The master's frame decrypted under the slave's key.
    add_trace(c, c.master, c.slave, ll_name(kLlStartEncRsp));
    send_frame(c.id, c.slave, Channel::kLinkControl, Bytes{kLlStartEncRsp},
               FrameMode::kEncrypted);
    return;
  }
  if (opcode == kLlStartEncRsp && at_master) {
    add_trace(c, c.slave, c.master, ll_name(kLlStartEncRsp));
    c.security =
        att::LinkSecurityState::encrypted(pending->second.slave_authenticated);
    finish_encryption(c.id, EncryptionResult::kEncrypted);
    return;
  }
  if (opcode == kLlRejectInd && at_master) {
    finish_encryption(c.id, EncryptionResult::kPinOrKeyMissing);
  }
}

void Medium::finish_encryption(ConnectionId id, EncryptionResult result) {
  auto it = encryptions_.find(id);
  if (it == encryptions_.end()) return;
  auto done = std::move(it->second.done);
  encryptions_.erase(it);
  Connection& c = connections_.at(id);
  c.encrypting = false;
  trace_.push_back(TraceLine{scheduler_.now(), agents_[c.master]->label(),
                             agents_[c.slave]->label(),
                             "ENCRYPTION " + std::string(to_string(result)) +
                                 (result == EncryptionResult::kEncrypted &&
                                          c.security.key_authenticated()
                                      ? " authenticated"
                                      : "")});
  if (result == EncryptionResult::kMicFailure) {
    disconnect(id, DisconnectReason::kMicFailure);
  }
  agents_[c.master]->on_encryption_changed(id, result);
  agents_[c.slave]->on_encryption_changed(id, result);
  if (done) done(result);
}

bool Medium::start_pairing(ConnectionId id) {
  const Connection* c = connection(id);
  if (!c || !c->alive || pairing_active(id)) return false;
  auto run = std::make_unique<PairingRun>(*this, id);
  PairingRun* raw = run.get();
  pairings_[id] = std::move(run);
  trace_.push_back(TraceLine{scheduler_.now(), agents_[c->master]->label(),
                             agents_[c->slave]->label(), "PAIRING start"});
  raw->start();
  return true;
}

bool Medium::pairing_active(ConnectionId id) const {
  auto it = pairings_.find(id);
  return it != pairings_.end() && !it->second->finished();
}

bool Medium::enter_passkey(ConnectionId id, DeviceId device,
                           uint32_t passkey) {
  auto it = pairings_.find(id);
  return it != pairings_.end() && it->second->enter_passkey(device, passkey);
}

bool Medium::confirm(ConnectionId id, DeviceId device, bool accept) {
  auto it = pairings_.find(id);
  return it != pairings_.end() && it->second->confirm(device, accept);
}

std::optional<uint32_t> Medium::displayed_value(ConnectionId id,
                                                DeviceId device) const {
  auto it = pairings_.find(id);
  if (it == pairings_.end()) return std::nullopt;
  return it->second->displayed_value(device);
}

bool Medium::awaiting_passkey(ConnectionId id, DeviceId device) const {
  auto it = pairings_.find(id);
  return it != pairings_.end() && it->second->awaiting_passkey(device);
}

}  // namespace scosim::link
