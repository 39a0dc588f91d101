#ifndef RFABE_SCHEME_H_
#define RFABE_SCHEME_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rfabe/groups.h"
#include "rfabe/policy.h"
#include "rfabe/rng.h"

namespace rfabe {

struct PublicParams {
  const GroupEnv* env = &GroupEnv::bls12_381();
  // The two checksum bases; a message pair (m, m') is committed to as
  // base_msg^H1(m) * base_companion^H1(m').
  G1Elem csum_base_msg;
  G1Elem csum_base_companion;
  // pair(g1, g2)^alpha.
  GtElem mpk;

  const GroupEnv& group() const { return *env; }
  friend bool operator==(const PublicParams& a, const PublicParams& b) {
    return a.env == b.env && a.csum_base_msg == b.csum_base_msg &&
           a.csum_base_companion == b.csum_base_companion && a.mpk == b.mpk;
  }
};

struct MasterSecretKey {
  Scalar alpha;
  friend bool operator==(const MasterSecretKey&, const MasterSecretKey&) = default;
};

struct SecretKey {
  // g1^alpha * H(anchor)^r
  G1Elem master_part;
  // H(attr)^r for every attribute held
  std::map<std::string, G1Elem, std::less<>> attribute_parts;
  // g2^r
  G2Elem randomizer;

  AttributeSet attributes() const;
  friend bool operator==(const SecretKey&, const SecretKey&) = default;
};

// Shared by fresh and revoked ciphertexts; a revoked one has a composed
// policy, a longer reuse vector and revocation_depth > 0.
struct Ciphertext {
  MspPolicy policy;
  // g2^s
  G2Elem share_g2{};
  // g2^(k * w[j]) where k = revocation_depth + 1
  std::vector<G2Elem> reuse_g2{};
  // H(anchor)^(M_i . (s, v)) * H(attr_i)^(k * w[occurrence_i])
  std::vector<G1Elem> rows{};
  // mpk^s * msg
  GtElem blinded_msg{};
  // mpk^s * msg'
  GtElem blinded_companion{};
  G1Elem checksum{};
  std::uint32_t revocation_depth = 0;

  friend bool operator==(const Ciphertext&, const Ciphertext&) = default;
};

// What the data owner keeps in order to delegate revocations later.
struct OwnerState {
  MspPolicy policy;
  std::vector<Scalar> reuse_exponents{};
  std::uint32_t revocation_depth = 0;

  friend bool operator==(const OwnerState&, const OwnerState&) = default;
};

enum class DecryptStatus {
  kOk,
  kNotSatisfied,
  kPreverificationFailure,
  kIntegrityFailure,
};
std::string_view decrypt_status_name(DecryptStatus status);

struct DecryptOutcome {
  DecryptStatus status = DecryptStatus::kNotSatisfied;
  std::optional<GtElem> msg;  // set only when status == kOk

  bool ok() const { return status == DecryptStatus::kOk; }
};

// Secrets captured for tests that check algebraic identities. Production
// callers pass nullptr.
struct KeygenTrapdoor {
  Scalar r;
};
struct EncryptTrapdoor {
  Scalar s;
  std::vector<Scalar> v;
  GtElem companion;
};

struct SetupResult {
  PublicParams pp;
  MasterSecretKey msk;
};
SetupResult setup(const GroupEnv& env, RandomSource& rng);

// Throws std::invalid_argument for an empty or malformed attribute set.
SecretKey keygen(const PublicParams& pp, const MasterSecretKey& msk,
                 const AttributeSet& attrs, RandomSource& rng,
                 KeygenTrapdoor* trapdoor = nullptr);

// pair(master_part, g2) == mpk * pair(H(anchor), randomizer).
bool key_is_consistent(const PublicParams& pp, const SecretKey& sk);

struct EncryptResult {
  Ciphertext ct;
  OwnerState state;
};
EncryptResult encrypt(const PublicParams& pp, const MspPolicy& policy,
                      const GtElem& msg, RandomSource& rng,
                      EncryptTrapdoor* trapdoor = nullptr);

G1Elem compute_checksum(const PublicParams& pp, const GtElem& msg,
                        const GtElem& companion);

// Throws std::invalid_argument if the ciphertext's shape is inconsistent
// with its policy.
void validate_ciphertext_shape(const Ciphertext& ct);

// Recomputes mpk^s from a key whose attributes satisfy the policy, or
// nullopt when they do not. `coefficients` receives the reconstruction
// coefficients used.
std::optional<GtElem> recover_blinding(const PublicParams& pp,
                                       const SecretKey& sk,
                                       const Ciphertext& ct,
                                       CoefficientSolution* coefficients =
                                           nullptr);

// Unblinds both messages and releases msg only if the checksum matches.
DecryptOutcome decrypt_or(const PublicParams& pp, const SecretKey& sk,
                          const Ciphertext& ct);

}  // namespace rfabe

#endif  // RFABE_SCHEME_H_
