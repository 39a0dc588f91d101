#include "rfabe/codec.h"

#include <gtest/gtest.h>

#include <random>

#include "testing/test_util.h"

namespace rfabe {
namespace {

class CodecTest : public ::testing::Test {
 protected:
  void SetUp() override {
    DeterministicRandom seed_rng(300);
    auto out = setup(GroupEnv::bls12_381(), seed_rng);
    pp_ = out.pp;
    msk_ = out.msk;
  }

  const GroupEnv& env() const { return pp_.group(); }

  PublicParams pp_;
  MasterSecretKey msk_;
  DeterministicRandom rng_{301};
};

DecodeErrorCode error_of(auto&& fn) {
  try {
    fn();
  } catch (const DecodeError& e) {
    return e.code();
  }
  ADD_FAILURE() << "no DecodeError thrown";
  return DecodeErrorCode::kInvalidValue;
}

TEST_F(CodecTest, EnvelopeHeader) {
  const Bytes bytes = encode(pp_);
  ASSERT_GE(bytes.size(), 6u);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "RFAB");
  EXPECT_EQ(bytes[4], 1);
  EXPECT_EQ(bytes[5], 1);
  EXPECT_EQ(peek_kind(encode(msk_)), ArtifactKind::kMasterSecretKey);
}

TEST_F(CodecTest, PublicParamsAndMasterKeyRoundtrip) {
  EXPECT_EQ(decode_public_params(encode(pp_)), pp_);
  EXPECT_EQ(decode_master_secret_key(encode(msk_)).alpha, msk_.alpha);
}

TEST_F(CodecTest, KeySizeMatchesAttributeCount) {
  const AttributeSet attrs = {"A1", "A2", "A3", "A4", "A5"};
  const SecretKey sk = keygen(pp_, msk_, attrs, rng_);
  std::size_t names = 0;
  for (const auto& a : attrs) names += 4 + a.size();
  // 6 G1 elements, 1 G2 element, a count, the names.
  EXPECT_EQ(encode(sk).size(), 6 + 6 * G1Elem::kBytes + G2Elem::kBytes + 4 + names);
  EXPECT_EQ(decode_secret_key(encode(sk)).attribute_parts, sk.attribute_parts);
}

TEST_F(CodecTest, RandomArtifactsRoundtrip) {
  std::mt19937_64 gen(302);
  const auto pool = testing::attribute_pool("X", 8);
  for (int trial = 0; trial < 100; ++trial) {
    const PolicyAst ast = testing::random_formula_bounded(gen, 3, 6, pool);
    const MspPolicy policy = compile_msp(ast);
    const AttributeSet attrs = testing::random_satisfying_set(gen, ast);
    const SecretKey sk = keygen(pp_, msk_, attrs, rng_);
    const SecretKey sk2 = decode_secret_key(encode(sk));
    EXPECT_EQ(sk2.master_part, sk.master_part);
    EXPECT_EQ(sk2.attribute_parts, sk.attribute_parts);
    EXPECT_EQ(sk2.randomizer, sk.randomizer);

    const auto enc = encrypt(pp_, policy, env().random_gt(rng_), rng_);
    EXPECT_EQ(peek_kind(encode(enc.ct)), ArtifactKind::kCiphertext);
    EXPECT_EQ(decode_ciphertext(encode(enc.ct)), enc.ct);
    const OwnerState state = decode_owner_state(encode(enc.state));
    EXPECT_EQ(state.policy, enc.state.policy);
    EXPECT_EQ(state.reuse_exponents, enc.state.reuse_exponents);

    if (trial % 10 == 0) {
      const auto [dg, next] = delegate(pp_, enc.state, compile_policy("R AND (R OR S)"), rng_);
      EXPECT_EQ(decode_delegation(encode(dg)), dg);
      const auto rev = revoke(pp_, enc.ct, dg, rng_);
      EXPECT_EQ(peek_kind(encode(rev.ct)), ArtifactKind::kRevokedCiphertext);
      EXPECT_EQ(decode_ciphertext(encode(rev.ct)), rev.ct);
      EXPECT_EQ(decode_owner_state(encode(next)).revocation_depth, 1u);
    }
  }
}

TEST_F(CodecTest, EncodingIsDeterministic) {
  DeterministicRandom a(7), b(7);
  const MspPolicy policy = compile_policy("(A OR B) AND C");
  const GtElem msg = env().random_gt(a);
  env().random_gt(b);
  const auto e1 = encrypt(pp_, policy, msg, a);
  const auto e2 = encrypt(pp_, policy, msg, b);
  EXPECT_EQ(encode(e1.ct), encode(e2.ct));
  EXPECT_EQ(armor(encode(e1.ct)), armor(encode(e2.ct)));
}

TEST_F(CodecTest, HeaderErrorsAreDistinct) {
  Bytes bytes = encode(msk_);
  EXPECT_EQ(error_of([&] { decode_master_secret_key(Bytes(bytes.begin(), bytes.begin() + 3)); }),
            DecodeErrorCode::kTruncated);
  Bytes magic = bytes;
  magic[0] = 'X';
  EXPECT_EQ(error_of([&] { decode_master_secret_key(magic); }), DecodeErrorCode::kBadMagic);
  Bytes version = bytes;
  version[4] = 2;
  EXPECT_EQ(error_of([&] { decode_master_secret_key(version); }), DecodeErrorCode::kBadVersion);
  Bytes kind = bytes;
  kind[5] = 9;
  EXPECT_EQ(error_of([&] { decode_master_secret_key(kind); }), DecodeErrorCode::kBadKind);
  EXPECT_EQ(error_of([&] { decode_secret_key(bytes); }), DecodeErrorCode::kBadKind);
  Bytes trailing = bytes;
  trailing.push_back(0);
  EXPECT_EQ(error_of([&] { decode_master_secret_key(trailing); }),
            DecodeErrorCode::kLengthMismatch);
  Bytes unreduced = bytes;
  std::fill(unreduced.begin() + 6, unreduced.end(), 0xff);
  EXPECT_EQ(error_of([&] { decode_master_secret_key(unreduced); }),
            DecodeErrorCode::kInvalidValue);
}

TEST_F(CodecTest, BadPointIsReported) {
  const SecretKey sk = keygen(pp_, msk_, {"A"}, rng_);
  Bytes bytes = encode(sk);
  bytes[6 + 10] ^= 0x01;  // inside master_part
  EXPECT_EQ(error_of([&] { decode_secret_key(bytes); }), DecodeErrorCode::kBadPoint);
}

TEST_F(CodecTest, CiphertextKindMustMatchDepth) {
  const auto enc = encrypt(pp_, compile_policy("A"), env().random_gt(rng_), rng_);
  Bytes bytes = encode(enc.ct);
  bytes[5] = static_cast<std::uint8_t>(ArtifactKind::kRevokedCiphertext);
  EXPECT_EQ(error_of([&] { decode_ciphertext(bytes); }), DecodeErrorCode::kInvalidValue);
}

TEST_F(CodecTest, ByteFlipsNeverCrash) {
  const auto enc = encrypt(pp_, compile_policy("(A OR B) AND C"), env().random_gt(rng_), rng_);
  const Bytes good = encode(enc.ct);
  std::mt19937_64 gen(303);
  int rejected = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    Bytes bad = good;
    const std::size_t at = gen() % bad.size();
    bad[at] ^= static_cast<std::uint8_t>(1 + gen() % 255);
    if (trial % 4 == 0) bad.resize(gen() % bad.size());
    try {
      const Ciphertext ct = decode_ciphertext(bad);
      EXPECT_NE(encode(ct), good);
    } catch (const DecodeError&) {
      ++rejected;
    }
  }
  EXPECT_GT(rejected, 0);
}

TEST_F(CodecTest, ArmorRoundtripAndWhitespace) {
  const auto enc = encrypt(pp_, compile_policy("A AND B"), env().random_gt(rng_), rng_);
  const Bytes bytes = encode(enc.ct);
  const std::string text = armor(bytes);
  EXPECT_EQ(text.rfind("-----BEGIN RFAB-CT-----\n", 0), 0u);
  EXPECT_NE(text.find("-----END RFAB-CT-----"), std::string::npos);
  EXPECT_EQ(dearmor(text), bytes);

  std::string messy = "\r\n  ";
  for (char c : text) {
    messy.push_back(c);
    if (c == '\n') messy += "\r\n \t";
  }
  // Reflow the base64 body to a different width.
  std::string reflowed;
  const std::size_t body_at = text.find('\n') + 1;
  const std::size_t end_at = text.find("-----END");
  std::string body;
  for (char c : text.substr(body_at, end_at - body_at)) {
    if (c != '\n') body.push_back(c);
  }
  reflowed = text.substr(0, body_at);
  for (std::size_t i = 0; i < body.size(); i += 17) reflowed += body.substr(i, 17) + "\n";
  reflowed += text.substr(end_at);
  EXPECT_EQ(dearmor(messy), bytes);
  EXPECT_EQ(dearmor(reflowed), bytes);
}

TEST_F(CodecTest, ArmorRejectsMismatches) {
  const std::string text = armor(encode(msk_));
  std::string relabeled = text;
  for (std::size_t at; (at = relabeled.find("RFAB-MSK")) != std::string::npos;) {
    relabeled.replace(at, 8, "RFAB-SK");
  }
  EXPECT_EQ(error_of([&] { dearmor(relabeled); }), DecodeErrorCode::kBadKind);
  std::string end_only = text;
  end_only.replace(end_only.find("END RFAB-MSK"), 12, "END RFAB-PP");
  EXPECT_EQ(error_of([&] { dearmor(end_only); }), DecodeErrorCode::kBadKind);
  EXPECT_EQ(error_of([&] { dearmor("no armor here"); }), DecodeErrorCode::kBadMagic);
  std::string bad_char = text;
  bad_char[text.find('\n') + 3] = '*';
  EXPECT_EQ(error_of([&] { dearmor(bad_char); }), DecodeErrorCode::kInvalidValue);
}

}  // namespace
}  // namespace rfabe
