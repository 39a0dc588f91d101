#include "rfabe/revocation.h"

#include <stdexcept>

namespace rfabe {
namespace {

void check_owner_state(const OwnerState& state) {
  const std::size_t need = state.policy.max_reuse();
  const std::size_t have = state.reuse_exponents.size();
  // After a delegation that extended w, the vector may be longer than the
  // composed policy strictly needs.
  const bool ok = state.revocation_depth == 0 ? have == need : have >= need;
  if (!ok) {
    throw std::invalid_argument("owner state reuse vector does not fit its policy");
  }
}

}  // namespace

DelegateResult delegate(const PublicParams& pp, const OwnerState& state,
                        const MspPolicy& added_policy, RandomSource& rng) {
  check_owner_state(state);
  const GroupEnv& env = pp.group();
  MspPolicy composed = and_compose(state.policy, added_policy);

  std::vector<Scalar> w = state.reuse_exponents;
  const std::size_t old_reuse = w.size();
  if (added_policy.max_reuse() > old_reuse) {
    for (std::size_t j = 0; j < added_policy.max_reuse(); ++j) {
      w.push_back(Scalar::random(rng));
    }
  }

  Delegation dg{.added_policy = added_policy, .base_policy = state.policy};
  dg.base_depth = state.revocation_depth;
  const std::size_t n1 = state.policy.rows();
  dg.added_rows.reserve(added_policy.rows());
  for (std::size_t i = 0; i < added_policy.rows(); ++i) {
    const Scalar& e = w[composed.occurrence(n1 + i) - 1];
    dg.added_rows.push_back(
        env.hash_to_g1(HashTag::kAttr, added_policy.attribute(i)).pow(e));
  }
  dg.reuse_update.reserve(w.size());
  for (const auto& x : w) dg.reuse_update.push_back(env.g2().pow(x));
  dg.reuse_extension.assign(dg.reuse_update.begin() + old_reuse,
                            dg.reuse_update.end());
  dg.reuse_exponents = w;

  OwnerState next{std::move(composed), std::move(w), state.revocation_depth + 1};
  return {std::move(dg), std::move(next)};
}

RevocationResult revoke(const PublicParams& pp, const Ciphertext& ct,
                        const Delegation& dg, RandomSource& rng,
                        RevokeTrapdoor* trapdoor) {
  validate_ciphertext_shape(ct);
  if (!(ct.policy == dg.base_policy) || ct.revocation_depth != dg.base_depth) {
    throw std::invalid_argument("delegation does not match this ciphertext");
  }
  if (dg.added_rows.size() != dg.added_policy.rows() ||
      dg.reuse_update.size() != dg.reuse_exponents.size() ||
      dg.reuse_extension.size() > dg.reuse_update.size() ||
      ct.reuse_g2.size() != dg.base_reuse()) {
    throw std::invalid_argument("malformed delegation");
  }
  const GroupEnv& env = pp.group();
  MspPolicy composed = and_compose(ct.policy, dg.added_policy);
  if (dg.reuse_exponents.size() < composed.max_reuse()) {
    throw std::invalid_argument("delegation reuse vector too short");
  }

  std::vector<Scalar> secret(composed.cols());  // (s', v')
  for (auto& x : secret) x = Scalar::random(rng);

  // Every attribute exponent in a ciphertext at depth d is (d + 1) * w;
  // one more layer is added here, keeping numerator and denominator of
  // the decryption equation in step.
  const Scalar layers = Scalar::from_u64(ct.revocation_depth + 1);

  RevokedCiphertext out{.policy = composed};
  out.share_g2 = ct.share_g2 * env.g2().pow(secret[0]);

  const std::size_t old_reuse = dg.base_reuse();
  out.reuse_g2.reserve(dg.reuse_update.size());
  for (std::size_t j = 0; j < dg.reuse_update.size(); ++j) {
    if (j < old_reuse) {
      out.reuse_g2.push_back(ct.reuse_g2[j] * dg.reuse_update[j]);
    } else {
      const G2Elem& ext = dg.reuse_extension[j - old_reuse];
      const G2Elem lifted = ct.revocation_depth == 0 ? ext : ext.pow(layers);
      out.reuse_g2.push_back(lifted * dg.reuse_update[j]);
    }
  }

  const G1Elem anchor = env.hash_to_g1(HashTag::kAnchor, "");
  const std::size_t n1 = ct.policy.rows();
  out.rows.reserve(composed.rows());
  for (std::size_t i = 0; i < composed.rows(); ++i) {
    const Scalar& w = dg.reuse_exponents[composed.occurrence(i) - 1];
    const G1Elem h = env.hash_to_g1(HashTag::kAttr, composed.attribute(i));
    if (i < n1) {
      out.rows.push_back(ct.rows[i] *
                         (anchor.pow(composed.row_dot(i, secret)) * h.pow(w)));
    } else {
      out.rows.push_back(dg.added_rows[i - n1] *
                         (anchor.pow(composed.row_dot(i, secret)) *
                          h.pow(layers * w)));
    }
  }
  G1Elem::normalize(out.rows);

  const GtElem blind = pp.mpk.pow(secret[0]);
  out.blinded_msg = ct.blinded_msg * blind;
  out.blinded_companion = ct.blinded_companion * blind;
  out.checksum = ct.checksum;
  out.revocation_depth = ct.revocation_depth + 1;

  if (trapdoor != nullptr) {
    trapdoor->s = secret[0];
    trapdoor->v.assign(secret.begin() + 1, secret.end());
  }
  return {std::move(out), std::move(composed)};
}

DecryptOutcome decrypt_re(const PublicParams& pp, const SecretKey& sk,
                          const G1Elem& original_checksum,
                          const RevokedCiphertext& ct) {
  if (!(original_checksum == ct.checksum)) {
    return {DecryptStatus::kPreverificationFailure, std::nullopt};
  }
  return decrypt_or(pp, sk, ct);
}

bool revocation_applied(const OwnerState& expected, const RevokedCiphertext& ct) {
  return ct.policy == expected.policy &&
         ct.revocation_depth == expected.revocation_depth &&
         ct.reuse_g2.size() == expected.reuse_exponents.size();
}

bool check_revoked_decryption_identities(const PublicParams& pp,
                                         const SecretKey& sk,
                                         const RevokedCiphertext& ct,
                                         const RevocationSecrets& secrets) {
  const GroupEnv& env = pp.group();
  auto solution = solve_coefficients(ct.policy, sk.attributes());
  if (!solution || ct.reuse_g2.size() != secrets.reuse_exponents.size()) {
    return false;
  }
  const Scalar layers = Scalar::from_u64(ct.revocation_depth + 1);
  const Scalar& r = secrets.key_randomness;
  const Scalar& s = secrets.total_share;
  const G1Elem anchor = env.hash_to_g1(HashTag::kAnchor, "");

  // Key side: e(master_part, share_g2).
  const GtElem key_side = env.pair(sk.master_part, ct.share_g2);
  const GtElem key_side_closed =
      env.gt().pow(secrets.alpha * s) * env.pair(anchor.pow(r * s), env.g2());

  // Reuse side: grouped attribute parts against reuse_g2.
  std::vector<G1Elem> grouped(ct.reuse_g2.size());
  G1Elem row_product;
  G1Elem attr_exponent_product;  // prod H(attr_i)^(gamma_i * k * w[occ_i])
  for (const auto& [row, gamma] : *solution) {
    const std::size_t slot = ct.policy.occurrence(row) - 1;
    const G1Elem h = env.hash_to_g1(HashTag::kAttr, ct.policy.attribute(row));
    grouped[slot] =
        grouped[slot] * sk.attribute_parts.find(ct.policy.attribute(row))->second.pow(gamma);
    row_product = row_product * ct.rows[row].pow(gamma);
    attr_exponent_product =
        attr_exponent_product * h.pow(gamma * layers * secrets.reuse_exponents[slot]);
  }
  GtElem reuse_side;
  for (std::size_t j = 0; j < grouped.size(); ++j) {
    reuse_side = reuse_side * env.pair(grouped[j], ct.reuse_g2[j]);
  }
  const GtElem reuse_side_closed =
      env.pair(attr_exponent_product, env.g2().pow(r));

  // Row side: combined rows against the key randomizer.
  const GtElem row_side = env.pair(row_product, sk.randomizer);
  const GtElem row_side_closed =
      env.pair(anchor.pow(s), env.g2().pow(r)) * reuse_side_closed;

  return key_side == key_side_closed && reuse_side == reuse_side_closed &&
         row_side == row_side_closed &&
         key_side_closed * reuse_side_closed / row_side_closed == pp.mpk.pow(s);
}

}  // namespace rfabe
