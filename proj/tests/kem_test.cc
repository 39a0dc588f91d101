#include "rfabe/kem.h"

#include <gtest/gtest.h>

#include "testing/test_util.h"

namespace rfabe {
namespace {

using testing::from_hex;
using testing::to_hex;

// Frozen from tests/oracles/gen_kem_kats.py.
TEST(KemTest, KdfKnownAnswer) {
  Bytes input(576);
  for (std::size_t i = 0; i < input.size(); ++i) input[i] = static_cast<std::uint8_t>(i);
  EXPECT_EQ(to_hex(derive_session_key(input)),
            "898d30fe33a93fc7feddae09aeed559145b312e2f10a6f4cb9478cfec55e20d7");
}

TEST(KemTest, WrapUnwrap) {
  DeterministicRandom rng(1);
  PublicParams pp = setup(GroupEnv::bls12_381(), rng).pp;
  const KemResult a = kem_wrap(pp, rng);
  const KemResult b = kem_wrap(pp, rng);
  EXPECT_EQ(kem_unwrap(a.msg), a.session_key);
  EXPECT_NE(a.session_key, b.session_key);
}

TEST(PayloadTest, OpensReferenceVector) {
  const Bytes k = from_hex("898d30fe33a93fc7feddae09aeed559145b312e2f10a6f4cb9478cfec55e20d7");
  SessionKey key;
  std::copy(k.begin(), k.end(), key.begin());
  const Bytes sealed = from_hex(
      "5246504c0101000102030405060708090a0b769761e202826d4a7e387f8eebfb84a20d"
      "be9d998bfd06a8586f54beec17");
  const auto opened = open_payload(key, sealed);
  ASSERT_TRUE(opened.has_value());
  EXPECT_EQ(std::string(opened->begin(), opened->end()), "attack at dawn");
}

TEST(PayloadTest, RoundTripAndTamper) {
  DeterministicRandom rng(2);
  SessionKey key{};
  key[0] = 7;
  const std::string text = "payload bytes";
  Bytes sealed = seal_payload(key, as_bytes(text), rng);
  auto opened = open_payload(key, sealed);
  ASSERT_TRUE(opened.has_value());
  EXPECT_EQ(std::string(opened->begin(), opened->end()), text);

  EXPECT_TRUE(open_payload(key, seal_payload(key, {}, rng)).has_value());

  for (std::size_t i = 6; i < sealed.size(); ++i) {
    Bytes bad = sealed;
    bad[i] ^= 0x40;
    EXPECT_FALSE(open_payload(key, bad).has_value()) << i;
  }
  SessionKey other = key;
  other[1] = 1;
  EXPECT_FALSE(open_payload(other, sealed).has_value());
}

TEST(PayloadTest, MalformedHeaders) {
  SessionKey key{};
  DeterministicRandom rng(3);
  const Bytes sealed = seal_payload(key, as_bytes("x"), rng);
  EXPECT_THROW(open_payload(key, Bytes(sealed.begin(), sealed.begin() + 20)), PayloadError);
  Bytes bad_magic = sealed;
  bad_magic[0] = 'X';
  EXPECT_THROW(open_payload(key, bad_magic), PayloadError);
  Bytes bad_dem = sealed;
  bad_dem[5] = 9;
  EXPECT_THROW(open_payload(key, bad_dem), PayloadError);
}

}  // namespace
}  // namespace rfabe
