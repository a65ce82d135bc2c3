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

#include "scosim/crypto.hpp"

#include <openssl/bn.h>
#include <openssl/core_names.h>
#include <openssl/ec.h>
#include <openssl/evp.h>
#include <openssl/obj_mac.h>

#include <memory>
#include <stdexcept>

namespace scosim::crypto {

namespace {

template <auto Fn>
struct Deleter {
  template <typename T>
  void operator()(T* p) const {
    Fn(p);
  }
};

using BnPtr = std::unique_ptr<BIGNUM, Deleter<BN_free>>;
using BnCtxPtr = std::unique_ptr<BN_CTX, Deleter<BN_CTX_free>>;
using PointPtr = std::unique_ptr<EC_POINT, Deleter<EC_POINT_free>>;
using CipherCtxPtr =
    std::unique_ptr<EVP_CIPHER_CTX, Deleter<EVP_CIPHER_CTX_free>>;
using MacPtr = std::unique_ptr<EVP_MAC, Deleter<EVP_MAC_free>>;
using MacCtxPtr = std::unique_ptr<EVP_MAC_CTX, Deleter<EVP_MAC_CTX_free>>;

// 0x6C888391AAF5A53860370BDB5A6083BE
constexpr Key128 kF5Salt = {0x6C, 0x88, 0x83, 0x91, 0xAA, 0xF5, 0xA5, 0x38,
                            0x60, 0x37, 0x0B, 0xDB, 0x5A, 0x60, 0x83, 0xBE};
constexpr std::array<uint8_t, 4> kF5KeyId = {0x62, 0x74, 0x6C, 0x65};  // btle

constexpr size_t kCcmNonceLength = 13;

void check(int rc, const char* what) {
  if (rc <= 0) throw std::runtime_error(std::string("openssl: ") + what);
}

const EC_GROUP* p256() {
  static const EC_GROUP* group =
      EC_GROUP_new_by_curve_name(NID_X9_62_prime256v1);
  return group;
}

template <size_t N>
void bn_to_array(const BIGNUM* bn, std::array<uint8_t, N>& out,
                 size_t offset = 0, size_t width = N) {
  check(BN_bn2binpad(bn, out.data() + offset, static_cast<int>(width)),
        "BN_bn2binpad");
}

BytesView x_coordinate(const PublicKey& pk) {
  return BytesView(pk.xy.data(), 32);
}

Bytes address_field(const DeviceAddress& addr) {
  Bytes out;
  out.push_back(addr.is_rpa() ? 0x01 : 0x00);
  append(out, addr.octets());
  return out;
}

}  // namespace

KeyPair KeyPair::from_private(const PrivateKey& scalar) {
  BnCtxPtr ctx(BN_CTX_new());
  BnPtr d(BN_bin2bn(scalar.data(), static_cast<int>(scalar.size()), nullptr));
  const BIGNUM* order = EC_GROUP_get0_order(p256());
  check(BN_nnmod(d.get(), d.get(), order, ctx.get()), "BN_nnmod");
  if (BN_is_zero(d.get())) check(BN_one(d.get()), "BN_one");

  PointPtr q(EC_POINT_new(p256()));
  check(EC_POINT_mul(p256(), q.get(), d.get(), nullptr, nullptr, ctx.get()),
        "EC_POINT_mul");
  BnPtr x(BN_new());
  BnPtr y(BN_new());
  check(EC_POINT_get_affine_coordinates(p256(), q.get(), x.get(), y.get(),
                                        ctx.get()),
        "EC_POINT_get_affine_coordinates");

  KeyPair kp;
  bn_to_array(d.get(), kp.private_key);
  bn_to_array(x.get(), kp.public_key.xy, 0, 32);
  bn_to_array(y.get(), kp.public_key.xy, 32, 32);
  return kp;
}

KeyPair KeyPair::generate(Rng& rng) {
  return from_private(rng.bytes<32>());
}

std::optional<DhKey> key_agreement(const PrivateKey& own,
                                   const PublicKey& peer) {
  BnCtxPtr ctx(BN_CTX_new());
  BnPtr x(BN_bin2bn(peer.xy.data(), 32, nullptr));
  BnPtr y(BN_bin2bn(peer.xy.data() + 32, 32, nullptr));
  PointPtr p(EC_POINT_new(p256()));
  if (EC_POINT_set_affine_coordinates(p256(), p.get(), x.get(), y.get(),
                                      ctx.get()) != 1) {
    return std::nullopt;
  }
  if (EC_POINT_is_on_curve(p256(), p.get(), ctx.get()) != 1 ||
      EC_POINT_is_at_infinity(p256(), p.get())) {
    return std::nullopt;
  }
  BnPtr d(BN_bin2bn(own.data(), static_cast<int>(own.size()), nullptr));
  PointPtr shared(EC_POINT_new(p256()));
  check(EC_POINT_mul(p256(), shared.get(), nullptr, p.get(), d.get(),
                     ctx.get()),
        "EC_POINT_mul");
  if (EC_POINT_is_at_infinity(p256(), shared.get())) return std::nullopt;
  BnPtr sx(BN_new());
  check(EC_POINT_get_affine_coordinates(p256(), shared.get(), sx.get(),
                                        nullptr, ctx.get()),
        "EC_POINT_get_affine_coordinates");
  DhKey out{};
  bn_to_array(sx.get(), out);
  return out;
}

Key128 aes_cmac(const Key128& key, BytesView message) {
  static EVP_MAC* mac = EVP_MAC_fetch(nullptr, "CMAC", nullptr);
  if (mac == nullptr) throw std::runtime_error("openssl: CMAC unavailable");
  MacCtxPtr ctx(EVP_MAC_CTX_new(mac));
  char cipher[] = "AES-128-CBC";
  OSSL_PARAM params[] = {
      OSSL_PARAM_construct_utf8_string(OSSL_MAC_PARAM_CIPHER, cipher, 0),
      OSSL_PARAM_construct_end()};
  check(EVP_MAC_init(ctx.get(), key.data(), key.size(), params),
        "EVP_MAC_init");
  check(EVP_MAC_update(ctx.get(), message.data(), message.size()),
        "EVP_MAC_update");
  Key128 out{};
  size_t len = 0;
  check(EVP_MAC_final(ctx.get(), out.data(), &len, out.size()),
        "EVP_MAC_final");
  return out;
}

Key128 aes_encrypt_block(const Key128& key, const Key128& block) {
  CipherCtxPtr ctx(EVP_CIPHER_CTX_new());
  check(EVP_EncryptInit_ex(ctx.get(), EVP_aes_128_ecb(), nullptr, key.data(),
                           nullptr),
        "EVP_EncryptInit_ex");
  EVP_CIPHER_CTX_set_padding(ctx.get(), 0);
  Key128 out{};
  int len = 0;
  check(EVP_EncryptUpdate(ctx.get(), out.data(), &len, block.data(),
                          static_cast<int>(block.size())),
        "EVP_EncryptUpdate");
  return out;
}

Key128 confirm_value(const PublicKey& u, const PublicKey& v,
                     const Nonce& nonce, BytesView z) {
  Bytes m;
  append(m, x_coordinate(u));
  append(m, x_coordinate(v));
  append(m, z);
  return aes_cmac(nonce, m);
}

uint32_t numeric_value(const PublicKey& pk_a, const PublicKey& pk_b,
                       const Nonce& n_a, const Nonce& n_b) {
  Bytes m;
  append(m, x_coordinate(pk_a));
  append(m, x_coordinate(pk_b));
  append(m, n_b);
  Key128 mac = aes_cmac(n_a, m);
  uint32_t low = (uint32_t{mac[12]} << 24) | (uint32_t{mac[13]} << 16) |
                 (uint32_t{mac[14]} << 8) | uint32_t{mac[15]};
  return low % 1'000'000;
}

Key128 passkey_commit(const PublicKey& pk_a, const PublicKey& pk_b,
                      uint32_t passkey, const Nonce& n) {
  const std::array<uint8_t, 5> z = {
      0x80, static_cast<uint8_t>(passkey >> 24),
      static_cast<uint8_t>(passkey >> 16), static_cast<uint8_t>(passkey >> 8),
      static_cast<uint8_t>(passkey)};
  return confirm_value(pk_a, pk_b, n, z);
}

bool passkey_verify(const Key128& commitment, const PublicKey& pk_a,
                    const PublicKey& pk_b, uint32_t passkey, const Nonce& n) {
  return passkey_commit(pk_a, pk_b, passkey, n) == commitment;
}

DerivedKeys derive_keys(const DhKey& dh, const Nonce& n_a, const Nonce& n_b,
                        const DeviceAddress& addr_a,
                        const DeviceAddress& addr_b) {
  const Key128 t = aes_cmac(kF5Salt, dh);
  auto block = [&](uint8_t counter) {
    Bytes m;
    m.push_back(counter);
    append(m, kF5KeyId);
    append(m, n_a);
    append(m, n_b);
    append(m, address_field(addr_a));
    append(m, address_field(addr_b));
    m.push_back(0x01);  // length = 256 bits
    m.push_back(0x00);
    return aes_cmac(t, m);
  };
  return DerivedKeys{block(0), block(1)};
}

Key128 dhkey_check(const MacKey& mac, BytesView transcript) {
  return aes_cmac(mac, transcript);
}

uint32_t rpa_hash(const Irk& irk, uint32_t prand) {
  Key128 r{};
  r[13] = static_cast<uint8_t>(prand >> 16);
  r[14] = static_cast<uint8_t>(prand >> 8);
  r[15] = static_cast<uint8_t>(prand);
  Key128 e = aes_encrypt_block(irk, r);
  return (uint32_t{e[13]} << 16) | (uint32_t{e[14]} << 8) | uint32_t{e[15]};
}

DeviceAddress rpa_generate(const Irk& irk, uint32_t prand) {
  prand &= kPrandMask;
  const uint64_t marked = (uint64_t{0x01} << 22) | prand;  // 0b01 || prand
  const uint64_t value = (marked << 24) | rpa_hash(irk, prand);
  return DeviceAddress::resolvable_private(value);
}

DeviceAddress rpa_generate(const Irk& irk, Rng& rng) {
  return rpa_generate(irk, static_cast<uint32_t>(rng.uniform(0, kPrandMask)));
}

bool rpa_resolve(const Irk& irk, const DeviceAddress& address) {
  if (!address.is_rpa()) return false;
  const auto prand = static_cast<uint32_t>((address.value() >> 24) & kPrandMask);
  const auto hash = static_cast<uint32_t>(address.value() & 0xFF'FFFF);
  return rpa_hash(irk, prand) == hash;
}

SessionKey derive_session_key(const Ltk& ltk, uint64_t connection_id,
                              uint64_t salt) {
  Key128 skd{};
  for (int i = 0; i < 8; ++i) {
    skd[i] = static_cast<uint8_t>(connection_id >> (8 * (7 - i)));
    skd[8 + i] = static_cast<uint8_t>(salt >> (8 * (7 - i)));
  }
  return SessionKey{aes_encrypt_block(ltk, skd)};
}

namespace {

std::array<uint8_t, kCcmNonceLength> ccm_nonce(uint64_t counter,
                                               Direction dir) {
  std::array<uint8_t, kCcmNonceLength> nonce{};
  for (int i = 0; i < 8; ++i) {
    nonce[i] = static_cast<uint8_t>(counter >> (8 * (7 - i)));
  }
  nonce[8] = static_cast<uint8_t>(dir);
  return nonce;
}

}  // namespace

Bytes session_encrypt(const SessionKey& key, uint64_t counter, Direction dir,
                      BytesView plaintext) {
  const auto nonce = ccm_nonce(counter, dir);
  CipherCtxPtr ctx(EVP_CIPHER_CTX_new());
  check(EVP_EncryptInit_ex(ctx.get(), EVP_aes_128_ccm(), nullptr, nullptr,
                           nullptr),
        "EVP_EncryptInit_ex");
  check(EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_AEAD_SET_IVLEN,
                            kCcmNonceLength, nullptr),
        "SET_IVLEN");
  check(EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_AEAD_SET_TAG, kMicLength,
                            nullptr),
        "SET_TAG");
  check(EVP_EncryptInit_ex(ctx.get(), nullptr, nullptr, key.value.data(),
                           nonce.data()),
        "EVP_EncryptInit_ex");
  int len = 0;
  check(EVP_EncryptUpdate(ctx.get(), nullptr, &len, nullptr,
                          static_cast<int>(plaintext.size())),
        "EVP_EncryptUpdate(len)");
  Bytes out(plaintext.size() + kMicLength);
  static const uint8_t kEmpty = 0;
  const uint8_t* in = plaintext.empty() ? &kEmpty : plaintext.data();
  check(EVP_EncryptUpdate(ctx.get(), out.data(), &len, in,
                          static_cast<int>(plaintext.size())),
        "EVP_EncryptUpdate");
  check(EVP_EncryptFinal_ex(ctx.get(), out.data() + len, &len),
        "EVP_EncryptFinal_ex");
  check(EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_AEAD_GET_TAG, kMicLength,
                            out.data() + plaintext.size()),
        "GET_TAG");
  return out;
}

std::variant<Bytes, DecryptError> session_decrypt(
    const std::optional<SessionKey>& key, uint64_t counter, Direction dir,
    BytesView ciphertext) {
  if (!key) return DecryptError::kKeyMissing;
  if (ciphertext.size() < kMicLength) {
    return DecryptError::kAuthenticationFailed;
  }
  const size_t body = ciphertext.size() - kMicLength;
  const auto nonce = ccm_nonce(counter, dir);
  Bytes tag(ciphertext.begin() + static_cast<std::ptrdiff_t>(body),
            ciphertext.end());

  CipherCtxPtr ctx(EVP_CIPHER_CTX_new());
  check(EVP_DecryptInit_ex(ctx.get(), EVP_aes_128_ccm(), nullptr, nullptr,
                           nullptr),
        "EVP_DecryptInit_ex");
  check(EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_AEAD_SET_IVLEN,
                            kCcmNonceLength, nullptr),
        "SET_IVLEN");
  check(EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_AEAD_SET_TAG, kMicLength,
                            tag.data()),
        "SET_TAG");
  check(EVP_DecryptInit_ex(ctx.get(), nullptr, nullptr, key->value.data(),
                           nonce.data()),
        "EVP_DecryptInit_ex");
  int len = 0;
  check(EVP_DecryptUpdate(ctx.get(), nullptr, &len, nullptr,
                          static_cast<int>(body)),
        "EVP_DecryptUpdate(len)");
  Bytes out(body + 1);
  static const uint8_t kEmpty = 0;
  const uint8_t* in = body == 0 ? &kEmpty : ciphertext.data();
  if (EVP_DecryptUpdate(ctx.get(), out.data(), &len, in,
                        static_cast<int>(body)) <= 0) {
    return DecryptError::kAuthenticationFailed;
  }
  out.resize(body);
  return out;
}

}  // namespace scosim::crypto
