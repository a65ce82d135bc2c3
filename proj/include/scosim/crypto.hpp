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
 *  Cryptographic toolbox for LE Secure Connections pairing.
 *
 *  Key agreement is P-256 ECDH. Commitments, the six-digit comparison value
 *  and key derivation are AES-CMAC constructions laid out like the f4/g2/f5
 *  functions of the core specification; the resolvable private address hash
 *  is AES-128 truncated to 24 bits; link traffic uses AES-128-CCM with a
 *  4-octet MIC. No claim of bit compatibility with real captures is made.
 *
 ******************************************************************************/

#pragma once

#include <cstdint>
#include <optional>
#include <variant>

#include "scosim/bytes.hpp"
#include "scosim/model.hpp"
#include "scosim/rng.hpp"

namespace scosim::crypto {

// Uncompressed P-256 point, X then Y, big endian.
struct PublicKey {
  std::array<uint8_t, 64> xy{};
  bool operator==(const PublicKey&) const = default;
};

using PrivateKey = Key256;
using DhKey = Key256;
using Nonce = Key128;
using MacKey = Key128;
using Ltk = Key128;
using Irk = Key128;

struct KeyPair {
  PrivateKey private_key{};
  PublicKey public_key;

  // Scalar is reduced into [1, n-1]; the public point follows from it.
  static KeyPair from_private(const PrivateKey& scalar);
  static KeyPair generate(Rng& rng);
};

// Returns nullopt when the peer point is not on the curve.
std::optional<DhKey> key_agreement(const PrivateKey& own,
                                   const PublicKey& peer);

// AES-CMAC with a 128-bit key.
Key128 aes_cmac(const Key128& key, BytesView message);

// AES-128 single block encryption.
Key128 aes_encrypt_block(const Key128& key, const Key128& block);

// f4-style commitment: AES-CMAC_nonce(U.x || V.x || z).
Key128 confirm_value(const PublicKey& u, const PublicKey& v,
                     const Nonce& nonce, BytesView z);

// Six-digit comparison value shown by both devices during Numeric
// Comparison. Argument order is initiator key, responder key, initiator
// nonce, responder nonce.
uint32_t numeric_value(const PublicKey& pk_a, const PublicKey& pk_b,
                       const Nonce& n_a, const Nonce& n_b);

inline constexpr uint32_t kMaxPasskey = 999'999;

// Commitment over the whole six-digit passkey.
Key128 passkey_commit(const PublicKey& pk_a, const PublicKey& pk_b,
                      uint32_t passkey, const Nonce& n);
bool passkey_verify(const Key128& commitment, const PublicKey& pk_a,
                    const PublicKey& pk_b, uint32_t passkey, const Nonce& n);

struct DerivedKeys {
  MacKey mac_key{};
  Ltk ltk{};
  bool operator==(const DerivedKeys&) const = default;
};

// f5-style derivation of (MacKey, LTK).
DerivedKeys derive_keys(const DhKey& dh, const Nonce& n_a, const Nonce& n_b,
                        const DeviceAddress& addr_a,
                        const DeviceAddress& addr_b);

// DHKey check value over an ordered pairing transcript.
Key128 dhkey_check(const MacKey& mac, BytesView transcript);

inline constexpr uint32_t kPrandMask = 0x3F'FFFF;  // 22 bits

// ah-style 24-bit hash of the 22-bit prand under an IRK.
uint32_t rpa_hash(const Irk& irk, uint32_t prand);
DeviceAddress rpa_generate(const Irk& irk, uint32_t prand);
DeviceAddress rpa_generate(const Irk& irk, Rng& rng);
// False for public addresses.
bool rpa_resolve(const Irk& irk, const DeviceAddress& address);

struct SessionKey {
  Key128 value{};
  bool operator==(const SessionKey&) const = default;
};

// SessionKey = AES_ltk(connection id || salt), both as 64-bit big endian.
SessionKey derive_session_key(const Ltk& ltk, uint64_t connection_id,
                              uint64_t salt);

enum class Direction : uint8_t { kMasterToSlave = 0, kSlaveToMaster = 1 };

inline constexpr size_t kMicLength = 4;

Bytes session_encrypt(const SessionKey& key, uint64_t counter, Direction dir,
                      BytesView plaintext);

enum class DecryptError : uint8_t {
  kKeyMissing,
  kAuthenticationFailed,
};

std::variant<Bytes, DecryptError> session_decrypt(
    const std::optional<SessionKey>& key, uint64_t counter, Direction dir,
    BytesView ciphertext);

}  // namespace scosim::crypto
