"""Independent reference values for the group-layer known-answer tests.

Uses py_ecc (pure-Python RFC 9380 hash-to-curve) and hashlib, so nothing
here shares code with the C++ implementation. Output is pasted into
tests/groups_test.cc.
"""
import hashlib

from py_ecc.bls.hash_to_curve import hash_to_G1
from py_ecc.bls.point_compression import compress_G1
from py_ecc.optimized_bls12_381 import curve_order

SUITE = "BLS12381G1_XMD:SHA-256_SSWU_RO_"


def g1_dst(tag: str) -> bytes:
    return f"RFABE-V01-{tag}-with-{SUITE}".encode()


def g1_kat(tag: str, msg: bytes) -> str:
    point = hash_to_G1(msg, g1_dst(tag), hashlib.sha256)
    return compress_G1(point).to_bytes(48, "big").hex()


def h1(data: bytes, attempt: int = 0) -> int:
    h = hashlib.sha512(b"RFABE-V01-H1-SHA512" + data)
    if attempt:
        h = hashlib.sha512(b"RFABE-V01-H1-SHA512" + data + bytes([attempt]))
    return int.from_bytes(h.digest(), "big") % curve_order


if __name__ == "__main__":
    print("ATTR dept:cardiology", g1_kat("ATTR", b"dept:cardiology"))
    print("ANCHOR ''", g1_kat("ANCHOR", b""))
    print("ATTR ''", g1_kat("ATTR", b""))
    fixed = bytes(range(32))
    print("H1(00..1f)", format(h1(fixed), "064x"))
    print("H1(00..1f, attempt 1)", format(h1(fixed, 1), "064x"))
    print("order", format(curve_order, "064x"))
