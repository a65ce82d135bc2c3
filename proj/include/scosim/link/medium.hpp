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
 *  Simulated radio medium and link layer.
 *
 *  The medium is lossless and every hop takes one millisecond. Advertisers
 *  are periodic with a random phase drawn when a connection attempt starts;
 *  the master connects to whichever matching advertiser's first event comes
 *  first. A slave whose slots are all taken stops being connectable.
 *
 *  Encryption start follows the LL_ENC_REQ / LL_ENC_RSP / LL_START_ENC
 *  exchange. A slave without a key answers LL_REJECT_IND with Pin or Key
 *  Missing; a slave holding a different key fails the first encrypted frame
 *  with a MIC error and the link drops.
 *
 *  Pairing runs inside the medium: the master calls start_pairing, each
 *  side's agent supplies its SMP configuration and user, and the agents are
 *  told about progress through PairingEvent.
 *
 ******************************************************************************/

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "scosim/att/attribute.hpp"
#include "scosim/att/pdu.hpp"
#include "scosim/crypto.hpp"
#include "scosim/link/scheduler.hpp"
#include "scosim/link/sniffer.hpp"
#include "scosim/model.hpp"
#include "scosim/smp/session.hpp"
#include "scosim/smp/user_agent.hpp"

namespace scosim::link {

using DeviceId = uint32_t;
using ConnectionId = uint32_t;

inline constexpr Time kHopDelay = kMillisecond;
inline constexpr Time kConnectSetup = 1'250;
inline constexpr Time kUserReaction = 1'500 * kMillisecond;
inline constexpr Time kPairingTimeout = 30 * kSecond;
inline constexpr Time kScanTimeout = kSecond;
inline constexpr double kMaxAdvertisingHz = 50.0;

struct Advertisement {
  DeviceAddress address;
  std::string name;
  std::vector<att::Uuid> services;
  double frequency_hz = 1.0;
};

struct ScanResult {
  Time time = 0;
  DeviceAddress address;
  std::string name;
  std::vector<att::Uuid> services;
};

enum class ConnectError : uint8_t {
  kNotFound,
  // Every advertiser with this address has its slots taken.
  kBusy,
  // The chosen advertiser's filter policy refused the master.
  kRejected,
};

std::string_view to_string(ConnectError error);

struct ConnectResult {
  std::optional<ConnectionId> connection;
  ConnectError error = ConnectError::kNotFound;
  // Only meaningful on success; the caller cannot see it on air.
  DeviceId peer = 0;
};

enum class DisconnectReason : uint8_t {
  kLocalHost,
  kRemoteUser,
  kMicFailure,
};

std::string_view to_string(DisconnectReason reason);

enum class EncryptionResult : uint8_t {
  kEncrypted,
  kPinOrKeyMissing,
  kMicFailure,
};

std::string_view to_string(EncryptionResult result);

struct LtkRecord {
  crypto::Ltk ltk{};
  bool authenticated = false;
};

struct Connection {
  ConnectionId id = 0;
  DeviceId master = 0;
  DeviceId slave = 0;
  DeviceAddress master_address;
  DeviceAddress slave_address;
  att::LinkSecurityState security;
  std::optional<crypto::SessionKey> master_key;
  std::optional<crypto::SessionKey> slave_key;
  uint64_t counter[2] = {0, 0};  // per direction, sender side
  bool alive = true;
  bool encrypting = false;
};

struct PairingEvent {
  enum class Kind : uint8_t {
    kMethodNegotiated,
    kConfirmRequested,
    kPasskeyDisplayed,
    kPasskeyRequested,
    kAuth2Done,
    kKeysDistributed,
    kFailed,
    kTimeout,
  };

  Kind kind = Kind::kFailed;
  smp::Role role = smp::Role::kInitiator;
  std::optional<PairingMethod> method;
  std::optional<uint32_t> value;
  std::optional<SecurityError> error;
  bool local = false;
  std::optional<KeySet> keys;
  std::optional<smp::ReceivedIdentity> peer_identity;
};

std::string_view to_string(PairingEvent::Kind kind);

class LinkAgent {
 public:
  virtual ~LinkAgent() = default;

  virtual std::string label() const = 0;

  // Slave side.
  virtual bool accept_connection(const DeviceAddress& /*master*/) {
    return true;
  }
  virtual size_t slot_limit() const { return 1; }

  // Key to start encryption with on this connection, if any.
  virtual std::optional<LtkRecord> ltk_for(ConnectionId /*id*/) {
    return std::nullopt;
  }

  virtual void on_connected(ConnectionId /*id*/) {}
  virtual void on_disconnected(ConnectionId /*id*/, DisconnectReason) {}
  virtual void on_att(ConnectionId /*id*/, const att::Pdu& /*pdu*/) {}
  virtual void on_encryption_changed(ConnectionId /*id*/, EncryptionResult) {}
  virtual void on_security_request(ConnectionId /*id*/,
                                   const PairingFeatures& /*features*/) {}

  virtual smp::SessionConfig pairing_config(ConnectionId /*id*/,
                                            smp::Role /*role*/) {
    return {};
  }
  // nullptr means nobody is at the device.
  virtual const smp::UserAgent* user_agent(ConnectionId /*id*/) {
    return nullptr;
  }
  virtual void on_pairing_event(ConnectionId /*id*/, const PairingEvent&) {}
};

struct TraceLine {
  Time time = 0;
  std::string source;
  std::string destination;
  std::string text;

  std::string to_line() const;
};

// Frame in flight, offered to the test interceptor before delivery.
struct Frame {
  ConnectionId connection = 0;
  DeviceId from = 0;
  DeviceId to = 0;
  bool encrypted = false;
  uint64_t counter = 0;
  Bytes data;
};

class PairingRun;

class Medium {
 public:
  explicit Medium(Scheduler& scheduler);
  ~Medium();

  Medium(const Medium&) = delete;
  Medium& operator=(const Medium&) = delete;

  Scheduler& scheduler() { return scheduler_; }
  SnifferLog& sniffer() { return sniffer_; }
  const std::vector<TraceLine>& trace() const { return trace_; }

  DeviceId attach(LinkAgent& agent);
  LinkAgent& agent(DeviceId id) { return *agents_.at(id); }

  // Throws std::invalid_argument for frequencies outside (0, 50] Hz.
  void advertise(DeviceId device, Advertisement ad);
  void stop_advertising(DeviceId device);
  bool advertising(DeviceId device) const;

  // Advertising events heard during the window, in time order.
  std::vector<ScanResult> scan(Time window);

  void connect(DeviceId master, const DeviceAddress& own_address,
               const DeviceAddress& target,
               std::function<void(const ConnectResult&)> done);

  void disconnect(ConnectionId id, DisconnectReason reason);

  const Connection* connection(ConnectionId id) const;
  std::vector<ConnectionId> connections_of(DeviceId device) const;
  size_t live_slave_connections(DeviceId device) const;
  // The other end of the connection as seen from `self`.
  DeviceId peer_of(ConnectionId id, DeviceId self) const;
  DeviceAddress peer_address(ConnectionId id, DeviceId self) const;

  void send_att(ConnectionId id, DeviceId from, const att::Pdu& pdu);
  void send_security_request(ConnectionId id, const PairingFeatures& features);

  // Master only. `done` is optional and runs after the agents are told.
  void start_encryption(
      ConnectionId id,
      std::function<void(EncryptionResult)> done = nullptr);

  // Master only. Returns false if a pairing is already running.
  bool start_pairing(ConnectionId id);
  bool pairing_active(ConnectionId id) const;
  // Physical input on a device awaiting a passkey.
  bool enter_passkey(ConnectionId id, DeviceId device, uint32_t passkey);
  bool confirm(ConnectionId id, DeviceId device, bool accept);
  std::optional<uint32_t> displayed_value(ConnectionId id,
                                          DeviceId device) const;
  bool awaiting_passkey(ConnectionId id, DeviceId device) const;

  // Test hook: may edit or inspect frames before delivery.
  void set_interceptor(std::function<void(Frame&)> interceptor) {
    interceptor_ = std::move(interceptor);
  }

  uint64_t delivered_frames() const { return delivered_; }

 private:
  friend class PairingRun;

  struct Advertiser {
    Advertisement ad;
    bool active = false;
  };

  enum class FrameMode : uint8_t { kAuto, kPlaintext, kEncrypted };

  void send_frame(ConnectionId id, DeviceId from, Channel channel,
                  const Bytes& body, FrameMode mode = FrameMode::kAuto);
  void deliver(Frame frame);
  void on_link_control(Connection& c, DeviceId to, const Bytes& body);
  void on_smp(Connection& c, DeviceId to, const Bytes& body);
  void finish_encryption(ConnectionId id, EncryptionResult result);
  void add_trace(const Connection& c, DeviceId from, DeviceId to,
                 std::string text);
  bool has_free_slot(DeviceId device) const;
  void check_slots() const;
  std::string address_label(const Connection& c, DeviceId device) const;

  Scheduler& scheduler_;
  SnifferLog sniffer_;
  std::vector<TraceLine> trace_;
  std::vector<LinkAgent*> agents_;
  std::map<DeviceId, Advertiser> advertisers_;
  std::map<ConnectionId, Connection> connections_;
  std::map<ConnectionId, std::unique_ptr<PairingRun>> pairings_;
  struct PendingEncryption {
    std::function<void(EncryptionResult)> done;
    LtkRecord master_ltk;
    uint64_t master_skd = 0;
    bool slave_authenticated = false;
  };
  std::map<ConnectionId, PendingEncryption> encryptions_;
  std::function<void(Frame&)> interceptor_;
  ConnectionId next_connection_ = 1;
  uint64_t delivered_ = 0;
};

}  // namespace scosim::link
