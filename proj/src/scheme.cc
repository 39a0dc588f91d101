#include "rfabe/scheme.h"

#include <stdexcept>

namespace rfabe {

std::string_view decrypt_status_name(DecryptStatus status) {
  switch (status) {
    case DecryptStatus::kOk:
      return "ok";
    case DecryptStatus::kNotSatisfied:
      return "not-satisfied";
    case DecryptStatus::kPreverificationFailure:
      return "preverification-failure";
    case DecryptStatus::kIntegrityFailure:
      return "integrity-failure";
  }
  return "unknown";
}

AttributeSet SecretKey::attributes() const {
  AttributeSet out;
  for (const auto& [attr, part] : attribute_parts) out.insert(attr);
  return out;
}

SetupResult setup(const GroupEnv& env, RandomSource& rng) {
  SetupResult out;
  out.msk.alpha = Scalar::random_nonzero(rng);
  out.pp.env = &env;
  out.pp.csum_base_msg = env.random_g1(rng);
  out.pp.csum_base_companion = env.random_g1(rng);
  out.pp.mpk = env.pair(env.g1(), env.g2()).pow(out.msk.alpha);
  return out;
}

SecretKey keygen(const PublicParams& pp, const MasterSecretKey& msk,
                 const AttributeSet& attrs, RandomSource& rng,
                 KeygenTrapdoor* trapdoor) {
  if (attrs.empty()) throw std::invalid_argument("attribute set is empty");
  for (const auto& a : attrs) {
    if (!is_valid_attribute(a)) {
      throw std::invalid_argument("invalid attribute '" + a + "'");
    }
  }
  const GroupEnv& env = pp.group();
  const Scalar r = Scalar::random_nonzero(rng);
  SecretKey sk;
  sk.master_part =
      env.g1().pow(msk.alpha) * env.hash_to_g1(HashTag::kAnchor, "").pow(r);
  std::vector<G1Elem> parts;
  parts.reserve(attrs.size());
  for (const auto& a : attrs) parts.push_back(env.hash_to_g1(HashTag::kAttr, a).pow(r));
  G1Elem::normalize(parts);
  auto part = parts.begin();
  for (const auto& a : attrs) sk.attribute_parts.emplace(a, *part++);
  sk.randomizer = env.g2().pow(r);
  if (trapdoor != nullptr) trapdoor->r = r;
  return sk;
}

bool key_is_consistent(const PublicParams& pp, const SecretKey& sk) {
  const GroupEnv& env = pp.group();
  return env.pair(sk.master_part, env.g2()) ==
         pp.mpk * env.pair(env.hash_to_g1(HashTag::kAnchor, ""), sk.randomizer);
}

G1Elem compute_checksum(const PublicParams& pp, const GtElem& msg,
                        const GtElem& companion) {
  const GroupEnv& env = pp.group();
  const Scalar hm = env.hash_to_scalar(msg.to_bytes());
  const Scalar hc = env.hash_to_scalar(companion.to_bytes());
  return pp.csum_base_msg.pow(hm) * pp.csum_base_companion.pow(hc);
}

EncryptResult encrypt(const PublicParams& pp, const MspPolicy& policy,
                      const GtElem& msg, RandomSource& rng,
                      EncryptTrapdoor* trapdoor) {
  const GroupEnv& env = pp.group();
  const std::size_t reuse = policy.max_reuse();

  std::vector<Scalar> secret(policy.cols());  // (s, v)
  for (auto& x : secret) x = Scalar::random(rng);
  std::vector<Scalar> w(reuse);
  for (auto& x : w) x = Scalar::random(rng);

  Ciphertext ct{.policy = policy};
  ct.share_g2 = env.g2().pow(secret[0]);
  ct.reuse_g2.reserve(reuse);
  for (const auto& x : w) ct.reuse_g2.push_back(env.g2().pow(x));

  const G1Elem anchor = env.hash_to_g1(HashTag::kAnchor, "");
  ct.rows.reserve(policy.rows());
  for (std::size_t i = 0; i < policy.rows(); ++i) {
    const G1Elem h = env.hash_to_g1(HashTag::kAttr, policy.attribute(i));
    ct.rows.push_back(anchor.pow(policy.row_dot(i, secret)) *
                      h.pow(w[policy.occurrence(i) - 1]));
  }
  G1Elem::normalize(ct.rows);

  const GtElem companion = env.random_gt(rng);
  const GtElem blind = pp.mpk.pow(secret[0]);
  ct.blinded_msg = blind * msg;
  ct.blinded_companion = blind * companion;
  ct.checksum = compute_checksum(pp, msg, companion);

  if (trapdoor != nullptr) {
    trapdoor->s = secret[0];
    trapdoor->v.assign(secret.begin() + 1, secret.end());
    trapdoor->companion = companion;
  }
  return {std::move(ct), OwnerState{policy, std::move(w), 0}};
}

void validate_ciphertext_shape(const Ciphertext& ct) {
  if (ct.rows.size() != ct.policy.rows()) {
    throw std::invalid_argument("ciphertext row count does not match policy");
  }
  if (ct.reuse_g2.size() < ct.policy.max_reuse()) {
    throw std::invalid_argument(
        "ciphertext reuse vector shorter than policy reuse bound");
  }
}

std::optional<GtElem> recover_blinding(const PublicParams& pp,
                                       const SecretKey& sk,
                                       const Ciphertext& ct,
                                       CoefficientSolution* coefficients) {
  validate_ciphertext_shape(ct);
  const GroupEnv& env = pp.group();
  auto solution = solve_coefficients(ct.policy, sk.attributes());
  if (!solution) return std::nullopt;

  // Attribute parts are grouped by occurrence index so that each reuse
  // slot costs a single pairing regardless of how many rows use it.
  const std::size_t slots = ct.reuse_g2.size();
  std::vector<std::vector<G1Elem>> key_terms(slots);
  std::vector<G1Elem> ct_terms;
  ct_terms.reserve(solution->size());
  for (const auto& [row, gamma] : *solution) {
    const G1Elem& part = sk.attribute_parts.find(ct.policy.attribute(row))->second;
    key_terms[ct.policy.occurrence(row) - 1].push_back(gamma.is_one() ? part
                                                                      : part.pow(gamma));
    ct_terms.push_back(gamma.is_one() ? ct.rows[row] : ct.rows[row].pow(gamma));
  }
  std::vector<G1Elem> grouped;
  grouped.reserve(slots);
  for (const auto& terms : key_terms) grouped.push_back(G1Elem::product(terms));
  const G1Elem row_product = G1Elem::product(ct_terms);

  // The row product goes in inverted so one final exponentiation covers
  // the quotient.
  std::vector<std::pair<G1Elem, G2Elem>> pairs;
  pairs.reserve(slots + 2);
  pairs.emplace_back(sk.master_part, ct.share_g2);
  for (std::size_t j = 0; j < slots; ++j) {
    pairs.emplace_back(grouped[j], ct.reuse_g2[j]);
  }
  pairs.emplace_back(row_product.inverse(), sk.randomizer);
  const GtElem blind = env.multi_pair(pairs);
  if (coefficients != nullptr) *coefficients = std::move(*solution);
  return blind;
}

DecryptOutcome decrypt_or(const PublicParams& pp, const SecretKey& sk,
                          const Ciphertext& ct) {
  auto blind = recover_blinding(pp, sk, ct);
  if (!blind) return {DecryptStatus::kNotSatisfied, std::nullopt};
  GtElem msg = ct.blinded_msg / *blind;
  const GtElem companion = ct.blinded_companion / *blind;
  if (!(compute_checksum(pp, msg, companion) == ct.checksum)) {
    return {DecryptStatus::kIntegrityFailure, std::nullopt};
  }
  return {DecryptStatus::kOk, std::move(msg)};
}

}  // namespace rfabe
