#ifndef RFABE_GROUPS_H_
#define RFABE_GROUPS_H_

// Type-3 bilinear group environment backed by BLS12-381 (blst).
//
// Group operations are written multiplicatively to match how the scheme is
// usually stated: `a * b` is the group law, `a.pow(x)` is exponentiation.
// Every counted primitive reports to the thread's active OpCounter.

#include <blst.h>

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rfabe/rng.h"

namespace rfabe {

using Bytes = std::vector<std::uint8_t>;

inline std::span<const std::uint8_t> as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

// Element of Z_p, p the (prime) order of G1, G2 and GT.
class Scalar {
 public:
  static constexpr std::size_t kBytes = 32;

  Scalar();  // zero
  static Scalar from_u64(std::uint64_t v);
  static Scalar from_i64(std::int64_t v);
  // Uniform in [0, p) via 512-bit wide reduction.
  static Scalar random(RandomSource& rng);
  static Scalar random_nonzero(RandomSource& rng);
  // Reduces an arbitrary-length big-endian integer modulo p.
  static Scalar reduce_be(std::span<const std::uint8_t> bytes);
  // Fixed-width big-endian; rejects values >= p.
  static std::optional<Scalar> from_bytes(std::span<const std::uint8_t> in);

  std::array<std::uint8_t, kBytes> to_bytes() const;
  std::string to_hex() const;

  bool is_zero() const;
  bool is_one() const;
  Scalar inverse() const;  // undefined for zero

  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;
  Scalar operator*(const Scalar& o) const;
  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  friend bool operator==(const Scalar& a, const Scalar& b);

  // Little-endian canonical form used by blst's scalar multiplication.
  blst_scalar to_blst() const;

 private:
  blst_fr v_;
};

enum class PointError { kNone, kBadEncoding, kNotOnCurve, kNotInSubgroup };

class G1Elem {
 public:
  static constexpr std::size_t kBytes = 48;

  G1Elem();  // identity
  static G1Elem generator();
  static std::optional<G1Elem> from_bytes(std::span<const std::uint8_t> in,
                                          PointError* error = nullptr);

  std::array<std::uint8_t, kBytes> to_bytes() const;  // compressed
  bool is_identity() const;
  bool in_subgroup() const;

  G1Elem operator*(const G1Elem& o) const;
  G1Elem& operator*=(const G1Elem& o);
  G1Elem pow(const Scalar& e) const;
  G1Elem inverse() const;
  // Product of all terms via batched affine addition; counted as
  // terms.size() - 1 multiplications.
  static G1Elem product(std::span<const G1Elem> terms);
  // Rewrites every point in affine form (Z = 1) with one batched inversion
  // so later products can skip the conversion. Not counted.
  static void normalize(std::span<G1Elem> points);
  friend bool operator==(const G1Elem& a, const G1Elem& b);

  const blst_p1& raw() const { return p_; }
  explicit G1Elem(const blst_p1& p) : p_(p) {}

 private:
  blst_p1 p_;
};

class G2Elem {
 public:
  static constexpr std::size_t kBytes = 96;

  G2Elem();
  static G2Elem generator();
  static std::optional<G2Elem> from_bytes(std::span<const std::uint8_t> in,
                                          PointError* error = nullptr);

  std::array<std::uint8_t, kBytes> to_bytes() const;
  bool is_identity() const;
  bool in_subgroup() const;

  G2Elem operator*(const G2Elem& o) const;
  G2Elem& operator*=(const G2Elem& o);
  G2Elem pow(const Scalar& e) const;
  G2Elem inverse() const;
  friend bool operator==(const G2Elem& a, const G2Elem& b);

  const blst_p2& raw() const { return p_; }
  explicit G2Elem(const blst_p2& p) : p_(p) {}

 private:
  blst_p2 p_;
};

// Target-group element. There is no standardized compressed form for GT on
// this curve, so the canonical encoding is the 12 big-endian Fp coefficients.
class GtElem {
 public:
  static constexpr std::size_t kBytes = 576;

  GtElem();  // identity
  static std::optional<GtElem> from_bytes(std::span<const std::uint8_t> in,
                                          PointError* error = nullptr);

  Bytes to_bytes() const;
  bool is_identity() const;
  bool in_subgroup() const;

  GtElem operator*(const GtElem& o) const;
  GtElem& operator*=(const GtElem& o);
  GtElem operator/(const GtElem& o) const;
  GtElem pow(const Scalar& e) const;
  GtElem inverse() const;
  friend bool operator==(const GtElem& a, const GtElem& b);

  const blst_fp12& raw() const { return f_; }
  explicit GtElem(const blst_fp12& f) : f_(f) {}

 private:
  blst_fp12 f_;
};

// Domain-separation tags for hashing into G1.
enum class HashTag { kAnchor, kAttr, kChecksumPhi, kChecksumVarphi };

std::string_view hash_tag_name(HashTag tag);

class GroupEnv {
 public:
  static const GroupEnv& bls12_381();
  // Looks up a supported curve by case-insensitive name; throws otherwise.
  static const GroupEnv& by_name(std::string_view name);

  std::string_view curve_id() const { return "BLS12-381"; }
  std::string_view g1_hash_suite() const {
    return "BLS12381G1_XMD:SHA-256_SSWU_RO_";
  }
  std::string_view scalar_hash_suite() const { return "SHA-512-WIDE-RETRY"; }
  // Big-endian group order p.
  std::array<std::uint8_t, 32> order_bytes() const;

  const G1Elem& g1() const { return g1_; }
  const G2Elem& g2() const { return g2_; }
  // pair(g1, g2), cached at construction and not charged to any counter.
  const GtElem& gt() const { return gt_; }

  GtElem pair(const G1Elem& a, const G2Elem& b) const;
  // Product of pairings with a single final exponentiation. Charged as
  // one pairing per entry plus (size - 1) GT multiplications.
  GtElem multi_pair(std::span<const std::pair<G1Elem, G2Elem>> pairs) const;

  G1Elem hash_to_g1(HashTag tag, std::span<const std::uint8_t> data) const;
  G1Elem hash_to_g1(HashTag tag, std::string_view data) const {
    return hash_to_g1(tag, as_bytes(data));
  }
  // Nonzero scalar; SHA-512 wide reduction, retried with an appended
  // counter byte in the (negligible) event the reduction is zero.
  Scalar hash_to_scalar(std::span<const std::uint8_t> data) const;

  // The DST used by hash_to_g1 for `tag`.
  std::string g1_dst(HashTag tag) const;
  std::string_view scalar_dst() const { return "RFABE-V01-H1-SHA512"; }

  G1Elem random_g1(RandomSource& rng) const;
  G2Elem random_g2(RandomSource& rng) const;
  GtElem random_gt(RandomSource& rng) const;

 private:
  GroupEnv();
  G1Elem g1_;
  G2Elem g2_;
  GtElem gt_;
};

// Uncounted helpers shared by the hashing code and its tests.
Scalar hash_to_scalar_attempt(std::string_view dst,
                              std::span<const std::uint8_t> data,
                              unsigned attempt);

}  // namespace rfabe

#endif  // RFABE_GROUPS_H_
