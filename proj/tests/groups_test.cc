#include "rfabe/groups.h"

#include <gtest/gtest.h>

#include "rfabe/op_counter.h"
#include "testing/test_util.h"

namespace rfabe {
namespace {

using testing::from_hex;
using testing::to_hex;

const GroupEnv& env() { return GroupEnv::bls12_381(); }

TEST(ScalarTest, ArithmeticAndEncoding) {
  const Scalar two = Scalar::from_u64(2);
  const Scalar three = Scalar::from_u64(3);
  EXPECT_EQ(two * three, Scalar::from_u64(6));
  EXPECT_EQ(two - three, Scalar::from_i64(-1));
  EXPECT_EQ(Scalar::from_i64(-1) + Scalar::from_u64(1), Scalar());
  EXPECT_TRUE((three * three.inverse()).is_one());

  DeterministicRandom rng(7);
  for (int i = 0; i < 20; ++i) {
    const Scalar s = Scalar::random(rng);
    const auto bytes = s.to_bytes();
    auto back = Scalar::from_bytes(bytes);
    ASSERT_TRUE(back.has_value());
    EXPECT_EQ(*back, s);
  }
}

TEST(ScalarTest, RejectsNonCanonical) {
  const auto order = env().order_bytes();
  EXPECT_FALSE(Scalar::from_bytes(order).has_value());
  Bytes minus_one(order.begin(), order.end());
  minus_one.back() -= 1;
  auto s = Scalar::from_bytes(minus_one);
  ASSERT_TRUE(s.has_value());
  EXPECT_EQ(*s, Scalar::from_i64(-1));
  Bytes zero(32, 0);
  EXPECT_TRUE(Scalar::from_bytes(zero)->is_zero());
}

TEST(G1Test, BatchedProductMatchesSequential) {
  DeterministicRandom rng(41);
  std::vector<G1Elem> terms;
  for (int i = 0; i < 9; ++i) terms.push_back(env().random_g1(rng));
  terms.push_back(G1Elem());  // identity is skipped
  terms.push_back(terms[2]);  // equal points need doubling
  G1Elem expected;
  for (const auto& t : terms) expected = expected * t;
  OpCounter c;
  G1Elem got;
  {
    CountScope scope(c);
    got = G1Elem::product(terms);
  }
  EXPECT_EQ(got, expected);
  EXPECT_EQ(c.mul_g1, terms.size() - 1);
  EXPECT_EQ(G1Elem::product({}), G1Elem());
  EXPECT_EQ(G1Elem::product(std::vector<G1Elem>{G1Elem(), G1Elem()}), G1Elem());
  EXPECT_EQ(G1Elem::product(std::vector<G1Elem>{terms[0]}), terms[0]);
}

TEST(PairingTest, ZeroExponentGivesIdentity) {
  const GtElem e = env().pair(env().g1().pow(Scalar()), env().g2());
  EXPECT_TRUE(e.is_identity());
}

TEST(PairingTest, SmallBilinearity) {
  const GtElem lhs = env().pair(env().g1().pow(Scalar::from_u64(2)),
                                env().g2().pow(Scalar::from_u64(3)));
  EXPECT_EQ(lhs, env().pair(env().g1(), env().g2()).pow(Scalar::from_u64(6)));
}

TEST(PairingTest, ExponentMovesAcrossArguments) {
  DeterministicRandom rng(11);
  for (int i = 0; i < 50; ++i) {
    const Scalar x = Scalar::random(rng);
    EXPECT_EQ(env().pair(env().g1().pow(x), env().g2()),
              env().pair(env().g1(), env().g2().pow(x)));
  }
}

TEST(PairingTest, BilinearAndNonDegenerate) {
  DeterministicRandom rng(12);
  const GtElem base = env().pair(env().g1(), env().g2());
  EXPECT_FALSE(base.is_identity());
  EXPECT_TRUE(base.in_subgroup());
  EXPECT_EQ(base, env().gt());
  // Order exactly p: base^p = 1 while base != 1 (p prime).
  const Scalar p_minus_1 = Scalar::from_i64(-1);
  EXPECT_EQ(base.pow(p_minus_1) * base, GtElem());
  for (int i = 0; i < 100; ++i) {
    const Scalar x = Scalar::random(rng);
    const Scalar y = Scalar::random(rng);
    EXPECT_EQ(env().pair(env().g1().pow(x), env().g2().pow(y)),
              base.pow(x * y));
  }
}

TEST(GtTest, PowMatchesRepeatedMultiplication) {
  const GtElem base = env().gt();
  GtElem acc;
  for (std::uint64_t k = 0; k < 40; ++k) {
    EXPECT_EQ(base.pow(Scalar::from_u64(k)), acc) << k;
    acc = acc * base;
  }
  EXPECT_EQ(base.pow(Scalar::from_i64(-1)), base.inverse());
  EXPECT_EQ(base / base, GtElem());
}

TEST(MultiPairTest, Singleton) {
  std::vector<std::pair<G1Elem, G2Elem>> pairs{{env().g1(), env().g2()}};
  EXPECT_EQ(env().multi_pair(pairs), env().pair(env().g1(), env().g2()));
}

TEST(MultiPairTest, ExponentsAdd) {
  const Scalar a = Scalar::from_u64(5), b = Scalar::from_u64(9);
  std::vector<std::pair<G1Elem, G2Elem>> pairs{
      {env().g1().pow(a), env().g2()}, {env().g1().pow(b), env().g2()}};
  EXPECT_EQ(env().multi_pair(pairs), env().gt().pow(a + b));
}

TEST(MultiPairTest, MatchesNaiveLoop) {
  DeterministicRandom rng(13);
  std::vector<std::pair<G1Elem, G2Elem>> pairs;
  for (int i = 0; i < 5; ++i) {
    pairs.emplace_back(env().random_g1(rng), env().random_g2(rng));
  }
  GtElem naive;
  for (const auto& [a, b] : pairs) naive = naive * env().pair(a, b);
  EXPECT_EQ(env().multi_pair(pairs), naive);
}

TEST(MultiPairTest, IdentityEntriesContributeOne) {
  std::vector<std::pair<G1Elem, G2Elem>> pairs{{G1Elem(), env().g2()},
                                               {env().g1(), env().g2()}};
  EXPECT_EQ(env().multi_pair(pairs), env().gt());
}

TEST(MultiPairTest, EmptyIsMisuse) {
  std::vector<std::pair<G1Elem, G2Elem>> none;
  EXPECT_THROW(env().multi_pair(none), std::invalid_argument);
}

TEST(HashToG1Test, DeterministicAndSeparated) {
  const G1Elem a = env().hash_to_g1(HashTag::kAttr, "dept:cardiology");
  EXPECT_EQ(a, env().hash_to_g1(HashTag::kAttr, "dept:cardiology"));
  EXPECT_NE(env().hash_to_g1(HashTag::kAnchor, ""),
            env().hash_to_g1(HashTag::kAttr, ""));
  EXPECT_NE(env().hash_to_g1(HashTag::kChecksumPhi, "x"),
            env().hash_to_g1(HashTag::kChecksumVarphi, "x"));
}

// Frozen from tests/oracles/gen_group_kats.py (py_ecc reference).
TEST(HashToG1Test, KnownAnswers) {
  EXPECT_EQ(to_hex(env().hash_to_g1(HashTag::kAttr, "dept:cardiology").to_bytes()),
            "878e1e75e6d221cbc9bd45f80b3282dbe6603070843e3a61ea1619871f59b199"
            "63dc3ac3deaec129796ec7748c78abda");
  EXPECT_EQ(to_hex(env().hash_to_g1(HashTag::kAnchor, "").to_bytes()),
            "b46d94b18415bfdd05d856119128fdcf7d8bdafcbf70232f85c74c25a324cd36"
            "9ba36fae87386e4389bc9778ea2ab070");
  EXPECT_EQ(to_hex(env().hash_to_g1(HashTag::kAttr, "").to_bytes()),
            "8dbdbf69d4729526106da548644b01eb0c6eeaf449a09f4d51c5e8e49da2838f"
            "84285fcc0ee2ded4f139a6d11f10ee0f");
}

TEST(HashToG1Test, OutputsAreInSubgroup) {
  for (int i = 0; i < 64; ++i) {
    const G1Elem h = env().hash_to_g1(HashTag::kAttr, "attr" + std::to_string(i));
    EXPECT_TRUE(h.in_subgroup());
    EXPECT_FALSE(h.is_identity());
  }
}

TEST(HashToScalarTest, KnownAnswers) {
  Bytes fixed(32);
  for (int i = 0; i < 32; ++i) fixed[i] = static_cast<std::uint8_t>(i);
  EXPECT_EQ(env().hash_to_scalar(fixed).to_hex(),
            "58db8aadf4fe74aa8168b53b307fca0f00e8b3f9b99959939796c3e953ade447");
  // The retry path appends a counter byte.
  EXPECT_EQ(hash_to_scalar_attempt(env().scalar_dst(), fixed, 1).to_hex(),
            "2241be27014ff6fe027e662683b984aecaab16159861b411659a8f1332083184");
  EXPECT_EQ(env().hash_to_scalar(fixed), env().hash_to_scalar(fixed));
}

TEST(HashToScalarTest, NeverZero) {
  DeterministicRandom rng(14);
  Bytes input(16);
  for (int i = 0; i < 100000; ++i) {
    rng.fill(input);
    ASSERT_FALSE(env().hash_to_scalar(input).is_zero());
  }
}

TEST(EncodingTest, PointsRoundTripAndRejectCorruption) {
  DeterministicRandom rng(15);
  const G1Elem a = env().random_g1(rng);
  const G2Elem b = env().random_g2(rng);
  const GtElem c = env().random_gt(rng);
  EXPECT_EQ(*G1Elem::from_bytes(a.to_bytes()), a);
  EXPECT_EQ(*G2Elem::from_bytes(b.to_bytes()), b);
  EXPECT_EQ(*GtElem::from_bytes(c.to_bytes()), c);
  EXPECT_EQ(*G1Elem::from_bytes(G1Elem().to_bytes()), G1Elem());

  auto bytes = c.to_bytes();
  bytes[100] ^= 0x01;
  PointError err = PointError::kNone;
  EXPECT_FALSE(GtElem::from_bytes(bytes, &err).has_value());
  EXPECT_NE(err, PointError::kNone);

  // x = 4 gives a point on E(Fp) outside the prime-order subgroup.
  Bytes off_subgroup(48, 0);
  off_subgroup[0] = 0x80;
  off_subgroup[47] = 0x04;
  err = PointError::kNone;
  auto p = G1Elem::from_bytes(off_subgroup, &err);
  EXPECT_FALSE(p.has_value());
  EXPECT_TRUE(err == PointError::kNotInSubgroup || err == PointError::kNotOnCurve);
}

TEST(OpCounterTest, ScriptedSequence) {
  OpCounter counter;
  {
    CountScope scope(counter);
    const G1Elem h = env().hash_to_g1(HashTag::kAttr, "a");
    const G1Elem x = h.pow(Scalar::from_u64(3)) * env().g1();
    const G2Elem y = env().g2().pow(Scalar::from_u64(5)) * env().g2();
    const GtElem e = env().pair(x, y);
    const GtElem f = e.pow(Scalar::from_u64(2)) / e;
    std::vector<std::pair<G1Elem, G2Elem>> batch{{x, y}, {h, y}, {x, env().g2()}};
    (void)env().multi_pair(batch);
    (void)env().hash_to_scalar(f.to_bytes());
    (void)env().random_gt(*std::make_unique<DeterministicRandom>(1));
  }
  OpCounter expected;
  expected.hashes = 2;
  expected.exp_g1 = 1;
  expected.mul_g1 = 1;
  expected.exp_g2 = 1;
  expected.mul_g2 = 1;
  expected.pairings = 1 + 3;
  expected.exp_gt = 1;
  expected.mul_gt = 1 + 2;
  expected.samples = 1;
  EXPECT_EQ(counter, expected) << counter.to_string();
}

TEST(OpCounterTest, ScopesNestAndRestore) {
  OpCounter outer, inner;
  {
    CountScope a(outer);
    (void)(env().g1() * env().g1());
    {
      CountScope b(inner);
      (void)(env().g1() * env().g1());
      (void)(env().g1() * env().g1());
    }
    (void)(env().g1() * env().g1());
  }
  EXPECT_EQ(outer.mul_g1, 2u);
  EXPECT_EQ(inner.mul_g1, 2u);
  EXPECT_EQ(active_counter(), nullptr);
}

TEST(GroupEnvTest, CurveLookup) {
  EXPECT_EQ(&GroupEnv::by_name("bls12-381"), &GroupEnv::bls12_381());
  EXPECT_EQ(&GroupEnv::by_name("BLS12_381"), &GroupEnv::bls12_381());
  EXPECT_THROW(GroupEnv::by_name("mnt224"), std::invalid_argument);
  EXPECT_EQ(to_hex(env().order_bytes()),
            "73eda753299d7d483339d80809a1d80553bda402fffe5bfeffffffff00000001");
}

}  // namespace
}  // namespace rfabe
