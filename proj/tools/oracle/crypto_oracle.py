#!/usr/bin/env python3
# Copyright 2026 The scosim Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at:
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Independent reference for the simulator's crypto constructions.

Recomputes every golden vector with the Python `cryptography` package and
prints the fixture consumed by crypto_test. Run it whenever the constructions
change on purpose:

    python3 tools/oracle/crypto_oracle.py > data/golden/crypto_vectors.txt
"""

from cryptography.hazmat.primitives import cmac
from cryptography.hazmat.primitives.asymmetric import ec
from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes
from cryptography.hazmat.primitives.ciphers.aead import AESCCM

P256_N = 0xFFFFFFFF00000000FFFFFFFFFFFFFFFFBCE6FAADA7179E84F3B9CAC2FC632551
F5_SALT = bytes.fromhex("6C888391AAF5A53860370BDB5A6083BE")


def aes_cmac(key, msg):
    c = cmac.CMAC(algorithms.AES(key))
    c.update(msg)
    return c.finalize()


def aes_block(key, block):
    enc = Cipher(algorithms.AES(key), modes.ECB()).encryptor()
    return enc.update(block) + enc.finalize()


def keypair(scalar_hex):
    d = int(scalar_hex, 16) % P256_N or 1
    priv = ec.derive_private_key(d, ec.SECP256R1())
    nums = priv.public_key().public_numbers()
    pub = nums.x.to_bytes(32, "big") + nums.y.to_bytes(32, "big")
    return d, pub


def dh(d, pub):
    x = int.from_bytes(pub[:32], "big")
    y = int.from_bytes(pub[32:], "big")
    peer = ec.EllipticCurvePublicNumbers(x, y, ec.SECP256R1()).public_key()
    priv = ec.derive_private_key(d, ec.SECP256R1())
    return priv.exchange(ec.ECDH(), peer)


def confirm_value(u, v, nonce, z):
    return aes_cmac(nonce, u[:32] + v[:32] + z)


def numeric_value(pk_a, pk_b, n_a, n_b):
    mac = aes_cmac(n_a, pk_a[:32] + pk_b[:32] + n_b)
    return int.from_bytes(mac[12:], "big") % 1000000


def passkey_commit(pk_a, pk_b, passkey, n):
    return confirm_value(pk_a, pk_b, n, b"\x80" + passkey.to_bytes(4, "big"))


def address_field(addr, rpa):
    return bytes([1 if rpa else 0]) + addr.to_bytes(6, "big")


def derive_keys(dhkey, n_a, n_b, a, b):
    t = aes_cmac(F5_SALT, dhkey)

    def block(counter):
        m = bytes([counter]) + b"btle" + n_a + n_b + a + b + b"\x01\x00"
        return aes_cmac(t, m)

    return block(0), block(1)


def rpa_hash(irk, prand):
    r = bytes(13) + prand.to_bytes(3, "big")
    return int.from_bytes(aes_block(irk, r)[13:], "big")


def rpa(irk, prand):
    prand &= 0x3FFFFF
    return ((((1 << 22) | prand) << 24) | rpa_hash(irk, prand))


def session_key(ltk, conn_id, salt):
    return aes_block(ltk, conn_id.to_bytes(8, "big") + salt.to_bytes(8, "big"))


def ccm_nonce(counter, direction):
    return counter.to_bytes(8, "big") + bytes([direction]) + bytes(4)


def main():
    out = []

    def put(key, value):
        if isinstance(value, (bytes, bytearray)):
            value = value.hex()
        out.append(f"{key} = {value}")

    priv_a = "3f49f6d4a3c55f3874c9b3e3d2103f504aff607beb40b7995899b8a6cd3c1abd"
    priv_b = "55188b3d32f6bb9a900afcfbeed4e72a59cb9ac2f19d7cfb6b4fdd49f47fc5fd"
    d_a, pub_a = keypair(priv_a)
    d_b, pub_b = keypair(priv_b)
    dhkey = dh(d_a, pub_b)
    assert dhkey == dh(d_b, pub_a)

    out.append("# scosim crypto vectors v1")
    put("private_a", d_a.to_bytes(32, "big"))
    put("private_b", d_b.to_bytes(32, "big"))
    put("public_a", pub_a)
    put("public_b", pub_b)
    put("dhkey", dhkey)

    cmac_key = bytes.fromhex("2b7e151628aed2a6abf7158809cf4f3c")
    cmac_msg = bytes.fromhex("6bc1bee22e409f96e93d7e117393172a")
    put("cmac_key", cmac_key)
    put("cmac_message", cmac_msg)
    put("cmac", aes_cmac(cmac_key, cmac_msg))
    put("aes_block", aes_block(cmac_key, cmac_msg))

    n_a = bytes.fromhex("d5cb8454d177733effffb2ec712baeab")
    n_b = bytes.fromhex("a6e8e7cc25a75f6e216583f7ff3dc4cf")
    put("nonce_a", n_a)
    put("nonce_b", n_b)
    put("confirm", confirm_value(pub_b, pub_a, n_b, b"\x00"))
    put("numeric", numeric_value(pub_a, pub_b, n_a, n_b))
    passkey = 123456
    put("passkey", passkey)
    put("passkey_commit", passkey_commit(pub_a, pub_b, passkey, n_a))

    addr_a = 0x5A1B2C3D4E5F
    addr_b = 0xC01DCAFE0001
    put("address_a", f"{addr_a:012X}/rpa")
    put("address_b", f"{addr_b:012X}")
    mac_key, ltk = derive_keys(dhkey, n_a, n_b, address_field(addr_a, True),
                               address_field(addr_b, False))
    put("mac_key", mac_key)
    put("ltk", ltk)
    transcript = bytes(range(0x20, 0x60))
    put("transcript", transcript)
    put("dhkey_check", aes_cmac(mac_key, transcript))

    irk = bytes.fromhex("ec0234a357c8ad05341010a60a397d9b")
    prand = 0x2A5B3C
    put("irk", irk)
    put("prand", f"{prand:06X}")
    put("rpa", f"{rpa(irk, prand):012X}")

    conn_id = 7
    salt = 0x0123456789ABCDEF
    sk = session_key(ltk, conn_id, salt)
    put("connection_id", conn_id)
    put("salt", f"{salt:016X}")
    put("session_key", sk)
    plaintext = b"\x04\x1b\x03\x00sys=120;dia=80;pul=72"
    counter, direction = 3, 1
    put("plaintext", plaintext)
    put("counter", counter)
    put("direction", direction)
    put("ciphertext", AESCCM(sk, tag_length=4).encrypt(
        ccm_nonce(counter, direction), plaintext, None))

    print("\n".join(out))


if __name__ == "__main__":
    main()
