"""Reference values for the KEM key derivation and payload AEAD.

Uses the `cryptography` package, independent of the OpenSSL calls made by
the C++ code path. Output is pasted into tests/kem_test.cc.
"""
from cryptography.hazmat.primitives import hashes
from cryptography.hazmat.primitives.ciphers.aead import ChaCha20Poly1305
from cryptography.hazmat.primitives.kdf.hkdf import HKDF

INFO = b"RFABE-V01-KEM-HKDF-SHA256"

gt_like = bytes(i % 256 for i in range(576))
key = HKDF(algorithm=hashes.SHA256(), length=32, salt=None, info=INFO).derive(gt_like)
print("session_key", key.hex())

nonce = bytes(range(12))
header = b"RFPL" + bytes([1, 1]) + nonce
sealed = ChaCha20Poly1305(key).encrypt(nonce, b"attack at dawn", header)
print("payload", (header + sealed).hex())
