#ifndef RFABE_REVOCATION_H_
#define RFABE_REVOCATION_H_

#include <cstdint>
#include <vector>

#include "rfabe/groups.h"
#include "rfabe/policy.h"
#include "rfabe/rng.h"
#include "rfabe/scheme.h"

namespace rfabe {

// A revoked ciphertext has the same layout as a fresh one.
using RevokedCiphertext = Ciphertext;

// Material the data owner hands to the cloud so it can AND a new policy
// onto a stored ciphertext.
struct Delegation {
  MspPolicy added_policy;
  // H(attr)^w'[occurrence] for each row of added_policy.
  std::vector<G1Elem> added_rows{};
  // g2^w'[j] for every reuse slot of the composed policy.
  std::vector<G2Elem> reuse_update{};
  // g2^w'[j] for the slots beyond the old reuse vector; empty when the
  // old vector was long enough.
  std::vector<G2Elem> reuse_extension{};
  // The ciphertext this delegation applies to is identified by its policy
  // and revocation depth.
  MspPolicy base_policy;
  std::uint32_t base_depth = 0;
  // The cloud needs w' to re-randomise the existing rows.
  std::vector<Scalar> reuse_exponents{};

  std::size_t base_reuse() const {
    return reuse_update.size() - reuse_extension.size();
  }
  friend bool operator==(const Delegation&, const Delegation&) = default;
};

struct DelegateResult {
  Delegation dg;
  OwnerState next;  // tracks the composed policy for further delegation
};

// Throws std::invalid_argument when the state is malformed or the new
// policy shares attributes with the current one.
DelegateResult delegate(const PublicParams& pp, const OwnerState& state,
                        const MspPolicy& added_policy, RandomSource& rng);

struct RevokeTrapdoor {
  Scalar s;
  std::vector<Scalar> v;
};

struct RevocationResult {
  RevokedCiphertext ct;
  // Receipt: the policy the cloud applied.
  MspPolicy applied_policy;
};

// Throws std::invalid_argument if `dg` does not belong to `ct`.
RevocationResult revoke(const PublicParams& pp, const Ciphertext& ct,
                        const Delegation& dg, RandomSource& rng,
                        RevokeTrapdoor* trapdoor = nullptr);

// Stage 1 compares the retained checksum with the one in `ct` and fails
// before any pairing is computed; stage 2 decrypts; stage 3 verifies.
DecryptOutcome decrypt_re(const PublicParams& pp, const SecretKey& sk,
                          const G1Elem& original_checksum,
                          const RevokedCiphertext& ct);

// True iff `ct` carries the policy, depth and reuse length the owner
// expects after delegating. Catches a cloud that skipped the update.
bool revocation_applied(const OwnerState& expected, const RevokedCiphertext& ct);

// Test-only secrets for checking the revoked-decryption identities.
struct RevocationSecrets {
  Scalar alpha;
  Scalar key_randomness;
  // Sum of the share exponents from encryption and every revocation.
  Scalar total_share;
  std::vector<Scalar> reuse_exponents;
};

// Recomputes the three pairing products a decryptor forms on `ct` and
// compares each with its closed form in terms of the secrets, then checks
// that they combine to mpk^total_share. False on any mismatch or when the
// key does not satisfy the policy.
bool check_revoked_decryption_identities(const PublicParams& pp,
                                         const SecretKey& sk,
                                         const RevokedCiphertext& ct,
                                         const RevocationSecrets& secrets);

}  // namespace rfabe

#endif  // RFABE_REVOCATION_H_
