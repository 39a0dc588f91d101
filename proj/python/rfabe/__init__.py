"""Revocable attribute-based encryption with integrity checksums."""

from ._core import (
    AuthenticationError,
    Ciphertext,
    DecodeError,
    DecryptError,
    Delegation,
    IntegrityError,
    MasterSecretKey,
    NotSatisfiedError,
    OwnerState,
    PayloadError,
    PolicyError,
    PreverificationError,
    PublicParams,
    SecretKey,
    decrypt,
    decrypt_revoked,
    delegate,
    encrypt,
    keygen,
    open,
    policy_info,
    revocation_applied,
    revoke,
    seal,
    setup,
)

__all__ = [
    "AuthenticationError",
    "Ciphertext",
    "DecodeError",
    "DecryptError",
    "Delegation",
    "IntegrityError",
    "MasterSecretKey",
    "NotSatisfiedError",
    "OwnerState",
    "PayloadError",
    "PolicyError",
    "PreverificationError",
    "PublicParams",
    "SecretKey",
    "decrypt",
    "decrypt_revoked",
    "delegate",
    "encrypt",
    "keygen",
    "open",
    "policy_info",
    "revocation_applied",
    "revoke",
    "seal",
    "setup",
]
