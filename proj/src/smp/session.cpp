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

#include "scosim/smp/session.hpp"

#include <stdexcept>
#include <utility>

namespace scosim::smp {

namespace {

constexpr std::array<uint8_t, 1> kZeroTag = {0x00};
constexpr uint8_t kInitiatorCheckTag = 'I';
constexpr uint8_t kResponderCheckTag = 'R';

}  // namespace

std::string_view to_string(Role role) {
  return role == Role::kInitiator ? "Initiator" : "Responder";
}

std::string_view to_string(State state) {
  switch (state) {
    case State::kIdle:
      return "Idle";
    case State::kFeaturesExchanged:
      return "FeaturesExchanged";
    case State::kPublicKeysExchanged:
      return "PublicKeysExchanged";
    case State::kAuth1Done:
      return "Auth1Done";
    case State::kAuth2Done:
      return "Auth2Done";
    case State::kKeysDistributed:
      return "KeysDistributed";
    case State::kFailed:
      return "Failed";
  }
  return "?";
}

PairingSession::PairingSession(Role role, SessionConfig config,
                               Endpoints endpoints, Rng& rng,
                               SessionListener& listener)
    : role_(role),
      config_(std::move(config)),
      endpoints_(endpoints),
      rng_(rng),
      listener_(listener) {}

void PairingSession::start() {
  if (role_ != Role::kInitiator || state_ != State::kIdle || request_sent_) {
    return;
  }
  FeatureExchange body;
  body.features = config_.features;
  body.initiator_key_dist = config_.local_identity ? kKeyDistIdKey : 0;
  body.responder_key_dist = kKeyDistIdKey;
  request_sent_ = true;
  send(make_pairing_request(body), Slot::kRequest);
}

void PairingSession::on_pdu(const Pdu& pdu) {
  if (state_ == State::kFailed || state_ == State::kKeysDistributed) return;
  if (pdu.opcode == Opcode::kSecurityRequest) return;
  log_.push_back(LoggedPdu{false, pdu});

  switch (pdu.opcode) {
    case Opcode::kPairingFailed: {
      const SecurityError reason = parse_failed(pdu);
      failure_ = reason;
      state_ = State::kFailed;
      awaiting_confirm_ = false;
      awaiting_passkey_ = false;
      displayed_.reset();
      listener_.on_failed(reason, false);
      return;
    }
    case Opcode::kPairingRequest:
      if (role_ == Role::kResponder && state_ == State::kIdle) {
        handle_request(pdu);
        return;
      }
      break;
    case Opcode::kPairingResponse:
      if (role_ == Role::kInitiator && state_ == State::kIdle &&
          request_sent_) {
        handle_response(pdu);
        return;
      }
      break;
    case Opcode::kPairingPublicKey:
      if (state_ == State::kFeaturesExchanged && !peer_public_) {
        handle_public_key(pdu);
        return;
      }
      break;
    case Opcode::kPairingConfirm:
      if (state_ == State::kPublicKeysExchanged && !peer_commitment_) {
        handle_confirm(pdu);
        return;
      }
      break;
    case Opcode::kPairingRandom:
      if (state_ == State::kPublicKeysExchanged && !peer_nonce_) {
        handle_random(pdu);
        return;
      }
      break;
    case Opcode::kPairingDhKeyCheck:
      handle_dhkey_check(pdu);
      return;
    case Opcode::kIdentityInformation:
    case Opcode::kIdentityAddressInformation:
      if (state_ == State::kAuth2Done && link_encrypted_) {
        handle_identity(pdu);
        return;
      }
      break;
    case Opcode::kSecurityRequest:
      return;
  }
  fail(SecurityError::kPairingAuthFail);
}

void PairingSession::on_user_confirm(bool accept) {
  if (!awaiting_confirm_ || state_ != State::kPublicKeysExchanged) return;
  awaiting_confirm_ = false;
  if (!accept) {
    fail(SecurityError::kPairingAuthFail);
    return;
  }
  finish_stage1();
}

void PairingSession::on_passkey_entered(uint32_t passkey) {
  if (!awaiting_passkey_ || state_ != State::kPublicKeysExchanged) return;
  awaiting_passkey_ = false;
  passkey_ = passkey;
  maybe_send_commitment();
}

void PairingSession::on_link_encrypted() {
  if (state_ != State::kAuth2Done || link_encrypted_) return;
  link_encrypted_ = true;
  // Responder distributes first.
  if (role_ == Role::kResponder ||
      (responder_dist_ & kKeyDistIdKey) == 0 || peer_identity_) {
    send_own_keys();
  }
  maybe_finish_distribution();
}

void PairingSession::abort(SecurityError reason) {
  if (state_ == State::kFailed || state_ == State::kKeysDistributed) return;
  fail(reason);
}

Bytes PairingSession::transcript() const {
  Bytes out;
  for (const auto& [slot, bytes] : slots_) append(out, bytes);
  return out;
}

void PairingSession::send(const Pdu& pdu, std::optional<Slot> slot) {
  log_.push_back(LoggedPdu{true, pdu});
  if (slot) record(pdu, *slot);
  listener_.send(pdu);
}

void PairingSession::record(const Pdu& pdu, Slot slot) {
  slots_[slot] = pdu.encode();
}

void PairingSession::advance(State next) {
  if (static_cast<uint8_t>(next) <= static_cast<uint8_t>(state_)) {
    throw std::logic_error("pairing state must advance");
  }
  state_ = next;
}

void PairingSession::fail(SecurityError reason) {
  if (state_ == State::kFailed) return;
  send(make_failed(reason));
  failure_ = reason;
  state_ = State::kFailed;
  awaiting_confirm_ = false;
  awaiting_passkey_ = false;
  displayed_.reset();
  listener_.on_failed(reason, true);
}

bool PairingSession::negotiate(const PairingFeatures& initiator,
                               const PairingFeatures& responder) {
  Result<PairingMethod> method = method_for(initiator, responder);
  if (!method.ok() && config_.permissive) method = PairingMethod::kJustWorks;
  if (role_ == Role::kResponder) {
    if (auto err = sc_only_gate(config_.sc_only, initiator, method)) {
      fail(*err);
      return false;
    }
  }
  if (config_.method_guard) {
    if (auto err = config_.method_guard(method)) {
      fail(*err);
      return false;
    }
  }
  if (!method.ok()) {
    fail(method.error());
    return false;
  }
  negotiated_ = *method;
  return true;
}

void PairingSession::handle_request(const Pdu& pdu) {
  auto body = parse_feature_exchange(pdu);
  if (!body) {
    fail(SecurityError::kPairingAuthFail);
    return;
  }
  record(pdu, Slot::kRequest);
  peer_features_ = body->features;
  if (!negotiate(body->features, config_.features)) return;

  initiator_dist_ = body->initiator_key_dist & kKeyDistIdKey;
  responder_dist_ = body->responder_key_dist &
                    (config_.local_identity ? kKeyDistIdKey : 0);
  FeatureExchange reply;
  reply.features = config_.features;
  reply.initiator_key_dist = initiator_dist_;
  reply.responder_key_dist = responder_dist_;
  send(make_pairing_response(reply), Slot::kResponse);
  advance(State::kFeaturesExchanged);
  listener_.on_method_negotiated(*negotiated_);
}

void PairingSession::handle_response(const Pdu& pdu) {
  auto body = parse_feature_exchange(pdu);
  if (!body) {
    fail(SecurityError::kPairingAuthFail);
    return;
  }
  record(pdu, Slot::kResponse);
  peer_features_ = body->features;
  if (!negotiate(config_.features, body->features)) return;

  initiator_dist_ = body->initiator_key_dist &
                    (config_.local_identity ? kKeyDistIdKey : 0);
  responder_dist_ = body->responder_key_dist & kKeyDistIdKey;
  advance(State::kFeaturesExchanged);
  listener_.on_method_negotiated(*negotiated_);
  if (state_ != State::kFeaturesExchanged) return;

  keypair_ = crypto::KeyPair::generate(rng_);
  send(make_public_key(keypair_.public_key), Slot::kPublicKeyA);
}

void PairingSession::handle_public_key(const Pdu& pdu) {
  auto peer = parse_public_key(pdu);
  if (!peer) {
    fail(SecurityError::kPairingAuthFail);
    return;
  }
  if (role_ == Role::kResponder) {
    record(pdu, Slot::kPublicKeyA);
    keypair_ = crypto::KeyPair::generate(rng_);
  } else {
    record(pdu, Slot::kPublicKeyB);
  }
  auto dh = crypto::key_agreement(keypair_.private_key, *peer);
  if (!dh) {
    fail(SecurityError::kPairingAuthFail);
    return;
  }
  peer_public_ = *peer;
  dh_key_ = *dh;
  if (role_ == Role::kResponder) {
    send(make_public_key(keypair_.public_key), Slot::kPublicKeyB);
  }
  advance(State::kPublicKeysExchanged);
  begin_stage1();
}

bool PairingSession::passkey_like() const {
  return negotiated_ == PairingMethod::kPasskeyEntry ||
         negotiated_ == PairingMethod::kOutOfBand;
}

void PairingSession::begin_stage1() {
  own_nonce_ = rng_.bytes<16>();
  switch (*negotiated_) {
    case PairingMethod::kJustWorks:
    case PairingMethod::kNumericComparison:
      if (role_ == Role::kResponder) {
        commitment_sent_ = true;
        send(make_confirm(crypto::confirm_value(keypair_.public_key,
                                                *peer_public_, own_nonce_,
                                                kZeroTag)),
             Slot::kConfirmB);
      }
      return;
    case PairingMethod::kPasskeyEntry: {
      const IoCapability peer_io = peer_features_->io;
      if (passkey_role(config_.features.io, peer_io) ==
          PasskeyRole::kDisplays) {
        passkey_ = static_cast<uint32_t>(rng_.uniform(0, crypto::kMaxPasskey));
        displayed_ = passkey_;
        listener_.on_passkey_displayed(*passkey_);
      } else {
        awaiting_passkey_ = true;
        listener_.on_passkey_requested();
      }
      maybe_send_commitment();
      return;
    }
    case PairingMethod::kOutOfBand:
      maybe_send_commitment();
      return;
  }
}

Key128 PairingSession::commitment(const crypto::PublicKey& first,
                                  const crypto::PublicKey& second,
                                  const crypto::Nonce& nonce) const {
  if (negotiated_ == PairingMethod::kOutOfBand) {
    const Key128 secret = config_.oob_secret.value_or(Key128{});
    return crypto::confirm_value(first, second, nonce, secret);
  }
  return crypto::passkey_commit(first, second, passkey_.value_or(0), nonce);
}

void PairingSession::maybe_send_commitment() {
  if (!passkey_like() || commitment_sent_ ||
      state_ != State::kPublicKeysExchanged) {
    return;
  }
  if (negotiated_ == PairingMethod::kPasskeyEntry && !passkey_) return;
  if (role_ == Role::kResponder && !peer_commitment_) return;
  commitment_sent_ = true;
  send(make_confirm(commitment(keypair_.public_key, *peer_public_, own_nonce_)),
       role_ == Role::kInitiator ? Slot::kConfirmA : Slot::kConfirmB);
}

void PairingSession::handle_confirm(const Pdu& pdu) {
  auto value = parse_key128(pdu);
  if (!value) {
    fail(SecurityError::kPairingAuthFail);
    return;
  }
  if (role_ == Role::kInitiator) {
    if (passkey_like() && !commitment_sent_) {
      fail(SecurityError::kPairingAuthFail);
      return;
    }
    record(pdu, Slot::kConfirmB);
    peer_commitment_ = *value;
    send(make_random(own_nonce_), Slot::kRandomA);
    return;
  }
  if (!passkey_like()) {
    fail(SecurityError::kPairingAuthFail);
    return;
  }
  record(pdu, Slot::kConfirmA);
  peer_commitment_ = *value;
  maybe_send_commitment();
}

void PairingSession::handle_random(const Pdu& pdu) {
  auto nonce = parse_key128(pdu);
  // In Just Works and Numeric Comparison only the responder commits.
  const bool responder_commits_only = !passkey_like();
  const bool own_commitment_ok =
      commitment_sent_ || (responder_commits_only && role_ == Role::kInitiator);
  const bool peer_commitment_ok =
      peer_commitment_ || (responder_commits_only && role_ == Role::kResponder);
  if (!nonce || !own_commitment_ok || !peer_commitment_ok) {
    fail(SecurityError::kPairingAuthFail);
    return;
  }
  peer_nonce_ = *nonce;
  const bool comparison = negotiated_ == PairingMethod::kNumericComparison;

  if (role_ == Role::kResponder) {
    record(pdu, Slot::kRandomA);
    if (passkey_like() &&
        commitment(*peer_public_, keypair_.public_key, *peer_nonce_) !=
            *peer_commitment_) {
      fail(SecurityError::kPairingAuthFail);
      return;
    }
    send(make_random(own_nonce_), Slot::kRandomB);
  } else {
    record(pdu, Slot::kRandomB);
    const Key128 expected =
        passkey_like()
            ? commitment(*peer_public_, keypair_.public_key, *peer_nonce_)
            : crypto::confirm_value(*peer_public_, keypair_.public_key,
                                    *peer_nonce_, kZeroTag);
    if (expected != *peer_commitment_) {
      fail(SecurityError::kPairingAuthFail);
      return;
    }
  }

  if (!comparison) {
    finish_stage1();
    return;
  }
  const bool initiator = role_ == Role::kInitiator;
  const crypto::PublicKey& pk_a =
      initiator ? keypair_.public_key : *peer_public_;
  const crypto::PublicKey& pk_b =
      initiator ? *peer_public_ : keypair_.public_key;
  const crypto::Nonce& n_a = initiator ? own_nonce_ : *peer_nonce_;
  const crypto::Nonce& n_b = initiator ? *peer_nonce_ : own_nonce_;
  const uint32_t value = crypto::numeric_value(pk_a, pk_b, n_a, n_b);
  displayed_ = value;
  awaiting_confirm_ = true;
  listener_.on_confirm_requested(value);
}

void PairingSession::finish_stage1() {
  advance(State::kAuth1Done);
  compute_keys();
  if (role_ == Role::kInitiator) {
    send(make_dhkey_check(check_value(true)));
  } else if (pending_check_) {
    const Key128 value = *pending_check_;
    pending_check_.reset();
    process_peer_check(value);
  }
}

void PairingSession::compute_keys() {
  const bool initiator = role_ == Role::kInitiator;
  const crypto::Nonce& n_a = initiator ? own_nonce_ : *peer_nonce_;
  const crypto::Nonce& n_b = initiator ? *peer_nonce_ : own_nonce_;
  const crypto::DerivedKeys derived = crypto::derive_keys(
      dh_key_, n_a, n_b, endpoints_.initiator, endpoints_.responder);
  KeySet keys;
  keys.dh_key = dh_key_;
  keys.mac_key = derived.mac_key;
  keys.ltk = derived.ltk;
  keys.authenticated = is_authenticated(*negotiated_);
  keys_ = keys;
}

Key128 PairingSession::check_value(bool initiator_side) const {
  Bytes message = transcript();
  message.push_back(initiator_side ? kInitiatorCheckTag : kResponderCheckTag);
  return crypto::dhkey_check(keys_->mac_key, message);
}

void PairingSession::handle_dhkey_check(const Pdu& pdu) {
  auto value = parse_key128(pdu);
  if (!value) {
    fail(SecurityError::kPairingAuthFail);
    return;
  }
  if (role_ == Role::kResponder && state_ == State::kPublicKeysExchanged &&
      peer_nonce_ && !pending_check_) {
    // The local user has not confirmed yet.
    pending_check_ = *value;
    return;
  }
  if (state_ != State::kAuth1Done) {
    fail(SecurityError::kPairingAuthFail);
    return;
  }
  process_peer_check(*value);
}

void PairingSession::process_peer_check(const Key128& value) {
  if (value != check_value(role_ == Role::kResponder)) {
    fail(SecurityError::kPairingAuthFail);
    return;
  }
  if (role_ == Role::kResponder) {
    send(make_dhkey_check(check_value(false)));
  }
  advance(State::kAuth2Done);
  displayed_.reset();
  listener_.on_auth2_done(*keys_);
}

void PairingSession::send_own_keys() {
  if (own_keys_sent_) return;
  own_keys_sent_ = true;
  const uint8_t dist =
      role_ == Role::kInitiator ? initiator_dist_ : responder_dist_;
  if ((dist & kKeyDistIdKey) == 0 || !config_.local_identity) return;
  send(make_identity_information(config_.local_identity->irk));
  send(make_identity_address_information(config_.local_identity->identity));
}

void PairingSession::handle_identity(const Pdu& pdu) {
  const uint8_t expected =
      role_ == Role::kInitiator ? responder_dist_ : initiator_dist_;
  if ((expected & kKeyDistIdKey) == 0 || peer_identity_) {
    fail(SecurityError::kPairingAuthFail);
    return;
  }
  if (pdu.opcode == Opcode::kIdentityInformation) {
    auto irk = parse_key128(pdu);
    if (!irk || received_irk_) {
      fail(SecurityError::kPairingAuthFail);
      return;
    }
    received_irk_ = *irk;
    return;
  }
  auto identity = parse_identity_address(pdu);
  if (!identity || !received_irk_) {
    fail(SecurityError::kPairingAuthFail);
    return;
  }
  peer_identity_ = ReceivedIdentity{*received_irk_, *identity};
  if (role_ == Role::kInitiator) send_own_keys();
  maybe_finish_distribution();
}

void PairingSession::maybe_finish_distribution() {
  if (state_ != State::kAuth2Done || !own_keys_sent_) return;
  const uint8_t expected =
      role_ == Role::kInitiator ? responder_dist_ : initiator_dist_;
  if ((expected & kKeyDistIdKey) != 0 && !peer_identity_) return;
  advance(State::kKeysDistributed);
  listener_.on_keys_distributed();
}

}  // namespace scosim::smp
