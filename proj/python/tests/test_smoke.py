import pytest

import rfabe


@pytest.fixture(scope="module")
def params():
    return rfabe.setup(seed=7)


def test_roundtrip_session_key(params):
    pp, msk = params
    sk = rfabe.keygen(pp, msk, ["doctor", "cardiology"], seed=1)
    ct, _, key = rfabe.encrypt(pp, "doctor AND (cardiology OR oncology)", seed=2)
    assert len(key) == 32
    assert rfabe.decrypt(pp, sk, ct) == key


def test_unsatisfied_key_raises(params):
    pp, msk = params
    sk = rfabe.keygen(pp, msk, ["nurse"], seed=3)
    ct, _, _ = rfabe.encrypt(pp, "doctor AND cardiology", seed=4)
    with pytest.raises(rfabe.NotSatisfiedError):
        rfabe.decrypt(pp, sk, ct)


def test_revocation_flow(params):
    pp, msk = params
    alice = rfabe.keygen(pp, msk, ["doctor", "active"], seed=5)
    bob = rfabe.keygen(pp, msk, ["doctor"], seed=6)
    ct, state, key = rfabe.encrypt(pp, "doctor", seed=8)
    retained = ct.checksum
    assert len(retained) == 48

    dg, next_state = rfabe.delegate(pp, state, "active", seed=9)
    revoked = rfabe.revoke(pp, ct, dg, seed=10)
    assert revoked.revocation_depth == 1
    assert rfabe.revocation_applied(next_state, revoked)
    assert not rfabe.revocation_applied(next_state, ct)

    assert rfabe.decrypt_revoked(pp, alice, retained, revoked) == key
    with pytest.raises(rfabe.NotSatisfiedError):
        rfabe.decrypt_revoked(pp, bob, retained, revoked)

    other, _, _ = rfabe.encrypt(pp, "doctor", seed=11)
    with pytest.raises(rfabe.PreverificationError):
        rfabe.decrypt_revoked(pp, alice, other.checksum, revoked)


def test_codec_roundtrip(params):
    pp, msk = params
    sk = rfabe.keygen(pp, msk, ["a", "b"], seed=12)
    ct, state, _ = rfabe.encrypt(pp, "a AND b", seed=13)
    assert rfabe.PublicParams.from_bytes(pp.to_bytes()) == pp
    assert rfabe.SecretKey.from_armor(sk.armor()) == sk
    assert rfabe.Ciphertext.from_bytes(ct.to_bytes()) == ct
    assert rfabe.OwnerState.from_armor(state.armor()) == state
    assert sk.attributes == ["a", "b"]
    with pytest.raises(rfabe.DecodeError):
        rfabe.Ciphertext.from_bytes(b"RFAB\x01")


def test_policy_info_and_errors():
    assert rfabe.policy_info("(a AND b) OR (a AND c)") == {"n1": 4, "n2": 3, "tau": 2}
    with pytest.raises(rfabe.PolicyError, match="offset"):
        rfabe.policy_info("a AND")


def test_payload_seal_open(params):
    pp, msk = params
    sk = rfabe.keygen(pp, msk, ["x"], seed=14)
    ct, _, key = rfabe.encrypt(pp, "x", seed=15)
    sealed = rfabe.seal(key, b"hello world", seed=16)
    assert rfabe.open(rfabe.decrypt(pp, sk, ct), sealed) == b"hello world"
    tampered = sealed[:-1] + bytes([sealed[-1] ^ 1])
    with pytest.raises(rfabe.AuthenticationError):
        rfabe.open(key, tampered)
