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
 *  LE Secure Connections pairing state machine.
 *
 *  One PairingSession runs on each side of a connection. The session never
 *  touches the link itself; outgoing PDUs and user-facing requests are
 *  reported through a SessionListener and the owner feeds back incoming
 *  PDUs, user decisions and the "link encrypted" signal that opens key
 *  distribution.
 *
 *  Passkey Entry uses a single commitment over the whole six-digit passkey
 *  rather than twenty bitwise rounds.
 *
 ******************************************************************************/

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "scosim/crypto.hpp"
#include "scosim/model.hpp"
#include "scosim/rng.hpp"
#include "scosim/smp/pdu.hpp"
#include "scosim/smp/policy.hpp"

namespace scosim::smp {

enum class Role : uint8_t { kInitiator, kResponder };

enum class State : uint8_t {
  kIdle,
  kFeaturesExchanged,
  kPublicKeysExchanged,
  kAuth1Done,
  kAuth2Done,
  kKeysDistributed,
  kFailed,
};

std::string_view to_string(Role role);
std::string_view to_string(State state);

struct LocalIdentity {
  crypto::Irk irk{};
  DeviceAddress identity;
};

struct ReceivedIdentity {
  crypto::Irk irk{};
  DeviceAddress identity;
};

// Called once the method is known, before any public key leaves the device.
// Returning an error aborts with that error.
using MethodGuard =
    std::function<std::optional<SecurityError>(const Result<PairingMethod>&)>;

struct SessionConfig {
  PairingFeatures features;
  ScOnlyPolicy sc_only;
  // Attacker stacks: fall back to Just Works instead of failing when the
  // feature pair has no valid method.
  bool permissive = false;
  std::optional<Key128> oob_secret;
  // Identity to hand out during key distribution, if any.
  std::optional<LocalIdentity> local_identity;
  MethodGuard method_guard;
};

// Addresses the two devices used on air for this connection.
struct Endpoints {
  DeviceAddress initiator;
  DeviceAddress responder;
};

class SessionListener {
 public:
  virtual ~SessionListener() = default;

  virtual void send(const Pdu& pdu) = 0;
  virtual void on_method_negotiated(PairingMethod /*method*/) {}
  virtual void on_confirm_requested(uint32_t /*value*/) {}
  virtual void on_passkey_displayed(uint32_t /*passkey*/) {}
  virtual void on_passkey_requested() {}
  virtual void on_auth2_done(const KeySet& /*keys*/) {}
  virtual void on_keys_distributed() {}
  virtual void on_failed(SecurityError /*reason*/, bool /*local*/) {}
};

struct LoggedPdu {
  bool outgoing = false;
  Pdu pdu;
};

class PairingSession {
 public:
  PairingSession(Role role, SessionConfig config, Endpoints endpoints,
                 Rng& rng, SessionListener& listener);

  PairingSession(const PairingSession&) = delete;
  PairingSession& operator=(const PairingSession&) = delete;

  // Initiator only: sends the Pairing Request.
  void start();

  void on_pdu(const Pdu& pdu);
  void on_user_confirm(bool accept);
  void on_passkey_entered(uint32_t passkey);
  void on_link_encrypted();

  // Local abort; sends Pairing Failed unless already terminal.
  void abort(SecurityError reason);

  Role role() const { return role_; }
  State state() const { return state_; }
  std::optional<SecurityError> failure() const { return failure_; }
  std::optional<PairingMethod> negotiated() const { return negotiated_; }
  const std::optional<KeySet>& keys() const { return keys_; }
  const std::optional<ReceivedIdentity>& peer_identity() const {
    return peer_identity_;
  }
  const PairingFeatures& local_features() const { return config_.features; }
  const std::optional<PairingFeatures>& peer_features() const {
    return peer_features_;
  }

  bool awaiting_confirmation() const { return awaiting_confirm_; }
  bool awaiting_passkey() const { return awaiting_passkey_; }
  // Value currently on this device's screen, if any.
  std::optional<uint32_t> displayed_value() const { return displayed_; }

  const std::vector<LoggedPdu>& log() const { return log_; }

  // Phase 1-2 messages in fixed slot order; input to the DHKey check.
  Bytes transcript() const;

 private:
  enum class Slot : uint8_t {
    kRequest,
    kResponse,
    kPublicKeyA,
    kPublicKeyB,
    kConfirmA,
    kConfirmB,
    kRandomA,
    kRandomB,
  };

  void send(const Pdu& pdu, std::optional<Slot> slot = std::nullopt);
  void record(const Pdu& pdu, Slot slot);
  void advance(State next);
  void fail(SecurityError reason);

  void handle_request(const Pdu& pdu);
  void handle_response(const Pdu& pdu);
  void handle_public_key(const Pdu& pdu);
  void handle_confirm(const Pdu& pdu);
  void handle_random(const Pdu& pdu);
  void handle_dhkey_check(const Pdu& pdu);
  void handle_identity(const Pdu& pdu);

  bool negotiate(const PairingFeatures& initiator,
                 const PairingFeatures& responder);
  void begin_stage1();
  void maybe_send_commitment();
  Key128 commitment(const crypto::PublicKey& own, const crypto::PublicKey& peer,
                    const crypto::Nonce& nonce) const;
  void finish_stage1();
  void compute_keys();
  Key128 check_value(bool initiator_side) const;
  void process_peer_check(const Key128& value);
  void send_own_keys();
  void maybe_finish_distribution();

  bool passkey_like() const;

  const Role role_;
  SessionConfig config_;
  const Endpoints endpoints_;
  Rng& rng_;
  SessionListener& listener_;

  State state_ = State::kIdle;
  std::optional<SecurityError> failure_;
  std::optional<PairingMethod> negotiated_;
  std::optional<PairingFeatures> peer_features_;
  bool request_sent_ = false;

  uint8_t initiator_dist_ = 0;
  uint8_t responder_dist_ = 0;

  crypto::KeyPair keypair_;
  std::optional<crypto::PublicKey> peer_public_;
  crypto::DhKey dh_key_{};
  crypto::Nonce own_nonce_{};
  std::optional<crypto::Nonce> peer_nonce_;
  std::optional<Key128> peer_commitment_;
  bool commitment_sent_ = false;
  std::optional<uint32_t> passkey_;

  bool awaiting_confirm_ = false;
  bool awaiting_passkey_ = false;
  std::optional<uint32_t> displayed_;
  std::optional<Key128> pending_check_;

  std::optional<KeySet> keys_;

  bool link_encrypted_ = false;
  bool own_keys_sent_ = false;
  std::optional<crypto::Irk> received_irk_;
  std::optional<ReceivedIdentity> peer_identity_;

  std::map<Slot, Bytes> slots_;
  std::vector<LoggedPdu> log_;
};

}  // namespace scosim::smp
