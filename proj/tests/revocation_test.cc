#include "rfabe/revocation.h"

#include <gtest/gtest.h>

#include "rfabe/op_counter.h"
#include "testing/test_util.h"

namespace rfabe {
namespace {

AttributeSet join(AttributeSet a, const AttributeSet& b) {
  a.insert(b.begin(), b.end());
  return a;
}

class RevocationTest : public ::testing::Test {
 protected:
  void SetUp() override {
    DeterministicRandom seed_rng(200);
    auto out = setup(GroupEnv::bls12_381(), seed_rng);
    pp_ = out.pp;
    msk_ = out.msk;
  }

  const GroupEnv& env() const { return pp_.group(); }
  SecretKey key(const AttributeSet& attrs, KeygenTrapdoor* td = nullptr) {
    return keygen(pp_, msk_, attrs, rng_, td);
  }

  PublicParams pp_;
  MasterSecretKey msk_;
  DeterministicRandom rng_{201};
};

TEST_F(RevocationTest, DelegateKeepsReuseVectorWhenLongEnough) {
  const auto enc = encrypt(pp_, compile_policy("A"), env().random_gt(rng_), rng_);
  const auto [dg, next] = delegate(pp_, enc.state, compile_policy("B"), rng_);
  EXPECT_EQ(next.reuse_exponents, enc.state.reuse_exponents);
  EXPECT_TRUE(dg.reuse_extension.empty());
  EXPECT_EQ(dg.reuse_update.size(), 1u);
  EXPECT_EQ(dg.added_rows.size(), 1u);
  EXPECT_EQ(next.revocation_depth, 1u);
  EXPECT_EQ(next.policy, and_compose(compile_policy("A"), compile_policy("B")));
}

TEST_F(RevocationTest, DelegateExtendsReuseVector) {
  const auto enc = encrypt(pp_, compile_policy("A"), env().random_gt(rng_), rng_);
  const MspPolicy added = compile_policy("C AND (C OR D)");
  ASSERT_EQ(added.max_reuse(), 2u);
  const auto [dg, next] = delegate(pp_, enc.state, added, rng_);
  EXPECT_EQ(next.reuse_exponents.size(), 3u);
  EXPECT_EQ(next.reuse_exponents[0], enc.state.reuse_exponents[0]);
  EXPECT_EQ(dg.reuse_update.size(), 3u);
  ASSERT_EQ(dg.reuse_extension.size(), 2u);
  EXPECT_EQ(dg.reuse_extension[0], env().g2().pow(next.reuse_exponents[1]));
  EXPECT_EQ(dg.reuse_extension[1], env().g2().pow(next.reuse_exponents[2]));
  EXPECT_EQ(dg.added_rows[1],
            env().hash_to_g1(HashTag::kAttr, "C").pow(next.reuse_exponents[1]));
}

TEST_F(RevocationTest, DelegateRejectsOverlapAndBadState) {
  const auto enc = encrypt(pp_, compile_policy("A AND B"), env().random_gt(rng_), rng_);
  EXPECT_THROW(delegate(pp_, enc.state, compile_policy("B OR C"), rng_),
               std::invalid_argument);
  OwnerState bad = enc.state;
  bad.reuse_exponents.push_back(Scalar());
  EXPECT_THROW(delegate(pp_, bad, compile_policy("C"), rng_), std::invalid_argument);
}

TEST_F(RevocationTest, DelegateCost) {
  const auto enc = encrypt(pp_, compile_policy("A"), env().random_gt(rng_), rng_);
  OpCounter c;
  {
    CountScope scope(c);
    delegate(pp_, enc.state, compile_policy("B AND C AND D"), rng_);
  }
  OpCounter expected;
  expected.exp_g1 = 3;
  expected.hashes = 3;
  expected.exp_g2 = 1;
  EXPECT_EQ(c, expected) << c.to_string();
}

TEST_F(RevocationTest, RevokeShapesAndCost) {
  const MspPolicy base = compile_policy("A AND B AND C");
  const MspPolicy added = compile_policy("D AND E");
  const auto enc = encrypt(pp_, base, env().random_gt(rng_), rng_);
  const auto [dg, next] = delegate(pp_, enc.state, added, rng_);
  OpCounter c;
  RevocationResult res = [&] {
    CountScope scope(c);
    return revoke(pp_, enc.ct, dg, rng_);
  }();
  const RevokedCiphertext& ct = res.ct;
  EXPECT_EQ(ct.rows.size(), 5u);
  EXPECT_EQ(ct.reuse_g2.size(), 1u);
  EXPECT_EQ(ct.checksum, enc.ct.checksum);
  EXPECT_EQ(ct.checksum.to_bytes(), enc.ct.checksum.to_bytes());
  EXPECT_EQ(ct.revocation_depth, 1u);
  EXPECT_EQ(res.applied_policy, next.policy);
  EXPECT_EQ(ct.policy, next.policy);

  EXPECT_EQ(c.exp_gt, 1u);
  EXPECT_EQ(c.mul_gt, 2u);
  EXPECT_EQ(c.exp_g1, 2u * 5);
  EXPECT_EQ(c.hashes, 5u + 1);
  EXPECT_EQ(c.mul_g1, 2u * 5);
  EXPECT_EQ(c.exp_g2, 1u);
  EXPECT_EQ(c.mul_g2, 1u + 1);
  EXPECT_EQ(c.pairings, 0u);
}

TEST_F(RevocationTest, RevokeRejectsForeignDelegation) {
  const auto a = encrypt(pp_, compile_policy("A AND B"), env().random_gt(rng_), rng_);
  const auto b = encrypt(pp_, compile_policy("A OR B"), env().random_gt(rng_), rng_);
  const auto [dg, next] = delegate(pp_, a.state, compile_policy("C"), rng_);
  EXPECT_THROW(revoke(pp_, b.ct, dg, rng_), std::invalid_argument);
  const auto once = revoke(pp_, a.ct, dg, rng_);
  // Applying the same delegation twice is a depth mismatch.
  EXPECT_THROW(revoke(pp_, once.ct, dg, rng_), std::invalid_argument);
}

TEST_F(RevocationTest, RandomisedRoundTrip) {
  std::mt19937_64 gen(202);
  const auto base_pool = testing::attribute_pool("b", 6);
  const auto added_pool = testing::attribute_pool("n", 6);
  for (int i = 0; i < 40; ++i) {
    const PolicyAst base = testing::random_formula_bounded(gen, 3, 8, base_pool);
    const PolicyAst added = testing::random_formula_bounded(gen, 3, 6, added_pool);
    const GtElem msg = env().random_gt(rng_);
    EncryptTrapdoor etd;
    const auto enc = encrypt(pp_, compile_msp(base), msg, rng_, &etd);
    const auto [dg, next] = delegate(pp_, enc.state, compile_msp(added), rng_);
    RevokeTrapdoor rtd;
    const auto res = revoke(pp_, enc.ct, dg, rng_, &rtd);

    const AttributeSet s_base = testing::random_satisfying_set(gen, base);
    const AttributeSet s_added = testing::random_satisfying_set(gen, added);
    KeygenTrapdoor ktd;
    const SecretKey full = key(join(s_base, s_added), &ktd);
    const DecryptOutcome ok = decrypt_re(pp_, full, enc.ct.checksum, res.ct);
    ASSERT_TRUE(ok.ok()) << base.to_string() << " / " << added.to_string();
    ASSERT_EQ(*ok.msg, msg);

    EXPECT_EQ(decrypt_re(pp_, key(s_base), enc.ct.checksum, res.ct).status,
              DecryptStatus::kNotSatisfied);

    const RevocationSecrets secrets{msk_.alpha, ktd.r, etd.s + rtd.s,
                                    next.reuse_exponents};
    EXPECT_TRUE(check_revoked_decryption_identities(pp_, full, res.ct, secrets));
    EXPECT_TRUE(revocation_applied(next, res.ct));
  }
}

TEST_F(RevocationTest, IdentityCheckDetectsCorruptRow) {
  EncryptTrapdoor etd;
  const auto enc2 = encrypt(pp_, compile_policy("A AND B"), env().random_gt(rng_), rng_, &etd);
  const auto [dg, next] = delegate(pp_, enc2.state, compile_policy("C"), rng_);
  RevokeTrapdoor rtd;
  auto res = revoke(pp_, enc2.ct, dg, rng_, &rtd);
  KeygenTrapdoor ktd;
  const SecretKey sk = key({"A", "B", "C"}, &ktd);
  const RevocationSecrets secrets{msk_.alpha, ktd.r, etd.s + rtd.s, next.reuse_exponents};
  ASSERT_TRUE(check_revoked_decryption_identities(pp_, sk, res.ct, secrets));
  res.ct.rows[1] = res.ct.rows[1] * env().g1();
  EXPECT_FALSE(check_revoked_decryption_identities(pp_, sk, res.ct, secrets));
}

TEST_F(RevocationTest, ChecksumSubstitutionStopsBeforePairing) {
  const auto enc = encrypt(pp_, compile_policy("A"), env().random_gt(rng_), rng_);
  const auto [dg, next] = delegate(pp_, enc.state, compile_policy("B"), rng_);
  auto res = revoke(pp_, enc.ct, dg, rng_);
  res.ct.checksum = env().random_g1(rng_);
  const SecretKey sk = key({"A", "B"});
  OpCounter c;
  DecryptOutcome out;
  {
    CountScope scope(c);
    out = decrypt_re(pp_, sk, enc.ct.checksum, res.ct);
  }
  EXPECT_EQ(out.status, DecryptStatus::kPreverificationFailure);
  EXPECT_EQ(c.pairings, 0u);
  EXPECT_FALSE(out.msg.has_value());
}

TEST_F(RevocationTest, ChainedRevocations) {
  const GtElem msg = env().random_gt(rng_);
  EncryptTrapdoor etd;
  auto enc = encrypt(pp_, compile_policy("A OR B"), msg, rng_, &etd);
  const G1Elem original = enc.ct.checksum;
  Ciphertext ct = enc.ct;
  OwnerState state = enc.state;
  Scalar total = etd.s;
  AttributeSet held{"B"};
  // The second round extends the reuse vector at depth 1, which exercises
  // the lifted extension path.
  const char* rounds[] = {"C", "D AND (D OR E)", "F OR G"};
  const char* picks[] = {"C", "D", "G"};
  for (int k = 0; k < 3; ++k) {
    auto [dg, next] = delegate(pp_, state, compile_policy(rounds[k]), rng_);
    RevokeTrapdoor rtd;
    auto res = revoke(pp_, ct, dg, rng_, &rtd);
    total += rtd.s;
    ct = res.ct;
    state = next;
    held.insert(picks[k]);

    EXPECT_EQ(ct.checksum, original);
    EXPECT_EQ(ct.revocation_depth, static_cast<std::uint32_t>(k + 1));
    const Scalar layers = Scalar::from_u64(k + 2);
    for (std::size_t j = 0; j < ct.reuse_g2.size(); ++j) {
      EXPECT_EQ(ct.reuse_g2[j], env().g2().pow(layers * state.reuse_exponents[j]));
    }
    KeygenTrapdoor ktd;
    const SecretKey sk = key(held, &ktd);
    const DecryptOutcome out = decrypt_re(pp_, sk, original, ct);
    ASSERT_TRUE(out.ok()) << "round " << k;
    EXPECT_EQ(*out.msg, msg);
    EXPECT_TRUE(check_revoked_decryption_identities(
        pp_, sk, ct, {msk_.alpha, ktd.r, total, state.reuse_exponents}));

    AttributeSet missing = held;
    missing.erase(picks[k]);
    EXPECT_EQ(decrypt_re(pp_, key(missing), original, ct).status,
              DecryptStatus::kNotSatisfied);
  }
}

TEST_F(RevocationTest, LazyCloudIsDetectedByReceiptAudit) {
  const auto enc = encrypt(pp_, compile_policy("A"), env().random_gt(rng_), rng_);
  const auto [dg, next] = delegate(pp_, enc.state, compile_policy("B"), rng_);
  EXPECT_FALSE(revocation_applied(next, enc.ct));
  EXPECT_TRUE(revocation_applied(next, revoke(pp_, enc.ct, dg, rng_).ct));
}

TEST_F(RevocationTest, SingleComponentTamperingNeverLeaksWrongPlaintext) {
  const GtElem msg = env().random_gt(rng_);
  const auto enc = encrypt(pp_, compile_policy("A AND (B OR C)"), msg, rng_);
  const auto [dg, next] = delegate(pp_, enc.state, compile_policy("D AND E"), rng_);
  const auto honest = revoke(pp_, enc.ct, dg, rng_).ct;
  const SecretKey sk = key({"A", "B", "D", "E"});
  auto expect_safe = [&](const RevokedCiphertext& bad, bool on_path) {
    const DecryptOutcome out = decrypt_re(pp_, sk, enc.ct.checksum, bad);
    if (out.ok()) {
      EXPECT_FALSE(on_path);
      EXPECT_EQ(*out.msg, msg);
    } else {
      EXPECT_TRUE(on_path);
    }
  };
  {
    auto bad = honest;
    bad.share_g2 = env().random_g2(rng_);
    expect_safe(bad, true);
  }
  {
    auto bad = honest;
    bad.reuse_g2[0] = env().random_g2(rng_);
    expect_safe(bad, true);
  }
  for (std::size_t i = 0; i < honest.rows.size(); ++i) {
    auto bad = honest;
    bad.rows[i] = env().random_g1(rng_);
    // Row 2 (attribute C) is not used by a key holding B.
    expect_safe(bad, i != 2);
  }
  {
    auto bad = honest;
    bad.blinded_msg = env().random_gt(rng_);
    expect_safe(bad, true);
  }
  {
    auto bad = honest;
    bad.blinded_companion = env().random_gt(rng_);
    expect_safe(bad, true);
  }
  {
    auto bad = honest;
    bad.checksum = env().random_g1(rng_);
    expect_safe(bad, true);
  }
}

}  // namespace
}  // namespace rfabe
