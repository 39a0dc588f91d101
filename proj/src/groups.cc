#include "rfabe/groups.h"

#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <cstring>
#include <memory>
#include <stdexcept>

#include "rfabe/op_counter.h"

namespace rfabe {
namespace {

template <typename Field>
void bump(Field OpCounter::*field, std::uint64_t n = 1) {
  if (OpCounter* c = active_counter()) c->*field += n;
}

constexpr std::array<std::uint8_t, 32> kOrder = {
    0x73, 0xed, 0xa7, 0x53, 0x29, 0x9d, 0x7d, 0x48, 0x33, 0x39, 0xd8,
    0x08, 0x09, 0xa1, 0xd8, 0x05, 0x53, 0xbd, 0xa4, 0x02, 0xff, 0xfe,
    0x5b, 0xfe, 0xff, 0xff, 0xff, 0xff, 0x00, 0x00, 0x00, 0x01};

// The scalar field is 255 bits wide.
constexpr std::size_t kScalarBits = 255;

blst_p1 mult_raw(const blst_p1& p, const Scalar& e) {
  const blst_scalar s = e.to_blst();
  blst_p1 out;
  blst_p1_mult(&out, &p, s.b, kScalarBits);
  return out;
}

blst_p2 mult_raw(const blst_p2& p, const Scalar& e) {
  const blst_scalar s = e.to_blst();
  blst_p2 out;
  blst_p2_mult(&out, &p, s.b, kScalarBits);
  return out;
}

// Fixed 4-bit window exponentiation in the cyclotomic subgroup.
blst_fp12 pow_raw(const blst_fp12& base, const Scalar& e) {
  const blst_scalar s = e.to_blst();
  std::array<blst_fp12, 16> table;
  table[0] = *blst_fp12_one();
  table[1] = base;
  for (std::size_t i = 2; i < table.size(); ++i) {
    blst_fp12_mul(&table[i], &table[i - 1], &base);
  }
  blst_fp12 acc = *blst_fp12_one();
  bool started = false;
  for (int byte = 31; byte >= 0; --byte) {
    for (int half = 1; half >= 0; --half) {
      const unsigned nibble = (s.b[byte] >> (4 * half)) & 0xf;
      if (started) {
        for (int k = 0; k < 4; ++k) blst_fp12_cyclotomic_sqr(&acc, &acc);
      }
      if (nibble != 0) {
        if (started) {
          blst_fp12_mul(&acc, &acc, &table[nibble]);
        } else {
          acc = table[nibble];
          started = true;
        }
      }
    }
  }
  return acc;
}

blst_fp12 pair_raw(const blst_p1& a, const blst_p2& b) {
  if (blst_p1_is_inf(&a) || blst_p2_is_inf(&b)) return *blst_fp12_one();
  blst_p1_affine pa;
  blst_p2_affine qb;
  blst_p1_to_affine(&pa, &a);
  blst_p2_to_affine(&qb, &b);
  blst_fp12 ml, out;
  blst_miller_loop(&ml, &qb, &pa);
  blst_final_exp(&out, &ml);
  return out;
}

}  // namespace

// ---------------------------------------------------------------- Scalar

Scalar::Scalar() { std::memset(&v_, 0, sizeof(v_)); }

Scalar Scalar::from_u64(std::uint64_t v) {
  const std::uint64_t limbs[4] = {v, 0, 0, 0};
  Scalar s;
  blst_fr_from_uint64(&s.v_, limbs);
  return s;
}

Scalar Scalar::from_i64(std::int64_t v) {
  if (v >= 0) return from_u64(static_cast<std::uint64_t>(v));
  return -from_u64(static_cast<std::uint64_t>(-(v + 1)) + 1);
}

Scalar Scalar::reduce_be(std::span<const std::uint8_t> bytes) {
  Scalar s;
  if (bytes.empty()) return s;
  blst_scalar tmp;
  blst_scalar_from_be_bytes(&tmp, bytes.data(), bytes.size());
  blst_fr_from_scalar(&s.v_, &tmp);
  return s;
}

Scalar Scalar::random(RandomSource& rng) {
  std::array<std::uint8_t, 64> wide;
  rng.fill(wide);
  return reduce_be(wide);
}

Scalar Scalar::random_nonzero(RandomSource& rng) {
  for (;;) {
    Scalar s = random(rng);
    if (!s.is_zero()) return s;
  }
}

std::optional<Scalar> Scalar::from_bytes(std::span<const std::uint8_t> in) {
  if (in.size() != kBytes) return std::nullopt;
  blst_scalar tmp;
  blst_scalar_from_bendian(&tmp, in.data());
  if (!blst_scalar_fr_check(&tmp)) {
    // fr_check rejects zero as well; zero is a legal field element here.
    if (std::all_of(in.begin(), in.end(), [](auto b) { return b == 0; })) {
      return Scalar();
    }
    return std::nullopt;
  }
  Scalar s;
  blst_fr_from_scalar(&s.v_, &tmp);
  return s;
}

std::array<std::uint8_t, Scalar::kBytes> Scalar::to_bytes() const {
  blst_scalar tmp;
  blst_scalar_from_fr(&tmp, &v_);
  std::array<std::uint8_t, kBytes> out;
  blst_bendian_from_scalar(out.data(), &tmp);
  return out;
}

std::string Scalar::to_hex() const {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string s;
  for (std::uint8_t b : to_bytes()) {
    s.push_back(kHex[b >> 4]);
    s.push_back(kHex[b & 0xf]);
  }
  return s;
}

blst_scalar Scalar::to_blst() const {
  blst_scalar tmp;
  blst_scalar_from_fr(&tmp, &v_);
  return tmp;
}

bool Scalar::is_zero() const {
  static const Scalar kZero;
  return std::memcmp(&v_, &kZero.v_, sizeof(v_)) == 0;
}

bool Scalar::is_one() const {
  static const Scalar kOne = from_u64(1);
  return *this == kOne;
}

Scalar Scalar::inverse() const {
  Scalar out;
  blst_fr_eucl_inverse(&out.v_, &v_);
  return out;
}

Scalar Scalar::operator+(const Scalar& o) const {
  Scalar out;
  blst_fr_add(&out.v_, &v_, &o.v_);
  return out;
}

Scalar Scalar::operator-(const Scalar& o) const {
  Scalar out;
  blst_fr_sub(&out.v_, &v_, &o.v_);
  return out;
}

Scalar Scalar::operator*(const Scalar& o) const {
  Scalar out;
  blst_fr_mul(&out.v_, &v_, &o.v_);
  return out;
}

Scalar Scalar::operator-() const {
  Scalar out;
  blst_fr_cneg(&out.v_, &v_, true);
  return out;
}

Scalar& Scalar::operator+=(const Scalar& o) { return *this = *this + o; }
Scalar& Scalar::operator-=(const Scalar& o) { return *this = *this - o; }
Scalar& Scalar::operator*=(const Scalar& o) { return *this = *this * o; }

bool operator==(const Scalar& a, const Scalar& b) {
  return std::memcmp(&a.v_, &b.v_, sizeof(a.v_)) == 0;
}

// ---------------------------------------------------------------- G1

G1Elem::G1Elem() { std::memset(&p_, 0, sizeof(p_)); }

G1Elem G1Elem::generator() { return G1Elem(*blst_p1_generator()); }

std::optional<G1Elem> G1Elem::from_bytes(std::span<const std::uint8_t> in,
                                         PointError* error) {
  auto fail = [&](PointError e) -> std::optional<G1Elem> {
    if (error) *error = e;
    return std::nullopt;
  };
  if (in.size() != kBytes) return fail(PointError::kBadEncoding);
  blst_p1_affine aff;
  switch (blst_p1_uncompress(&aff, in.data())) {
    case BLST_SUCCESS:
      break;
    case BLST_POINT_NOT_ON_CURVE:
      return fail(PointError::kNotOnCurve);
    default:
      return fail(PointError::kBadEncoding);
  }
  if (!blst_p1_affine_in_g1(&aff)) return fail(PointError::kNotInSubgroup);
  blst_p1 p;
  blst_p1_from_affine(&p, &aff);
  G1Elem out(p);
  const auto again = out.to_bytes();
  if (!std::equal(again.begin(), again.end(), in.begin())) {
    return fail(PointError::kBadEncoding);
  }
  if (error) *error = PointError::kNone;
  return out;
}

std::array<std::uint8_t, G1Elem::kBytes> G1Elem::to_bytes() const {
  std::array<std::uint8_t, kBytes> out;
  blst_p1_compress(out.data(), &p_);
  return out;
}

bool G1Elem::is_identity() const { return blst_p1_is_inf(&p_); }
bool G1Elem::in_subgroup() const { return blst_p1_in_g1(&p_); }

G1Elem G1Elem::operator*(const G1Elem& o) const {
  bump(&OpCounter::mul_g1);
  blst_p1 out;
  blst_p1_add_or_double(&out, &p_, &o.p_);
  return G1Elem(out);
}

G1Elem& G1Elem::operator*=(const G1Elem& o) { return *this = *this * o; }

G1Elem G1Elem::product(std::span<const G1Elem> terms) {
  if (terms.empty()) return G1Elem();
  bump(&OpCounter::mul_g1, terms.size() - 1);
  const blst_fp& one = blst_p1_generator()->z;
  std::vector<blst_p1_affine> affine;
  affine.reserve(terms.size());
  std::vector<const blst_p1*> jacobian;
  for (const auto& t : terms) {
    if (blst_p1_is_inf(&t.p_)) continue;
    if (std::memcmp(&t.p_.z, &one, sizeof(one)) == 0) {
      affine.push_back({t.p_.x, t.p_.y});
    } else {
      jacobian.push_back(&t.p_);
    }
  }
  if (!jacobian.empty()) {
    const std::size_t done = affine.size();
    affine.resize(done + jacobian.size());
    blst_p1s_to_affine(affine.data() + done, jacobian.data(), jacobian.size());
  }
  if (affine.empty()) return G1Elem();
  std::vector<const blst_p1_affine*> ptrs;
  ptrs.reserve(affine.size());
  for (const auto& a : affine) ptrs.push_back(&a);
  blst_p1 out;
  blst_p1s_add(&out, ptrs.data(), ptrs.size());
  return G1Elem(out);
}

void G1Elem::normalize(std::span<G1Elem> points) {
  std::vector<const blst_p1*> jacobian;
  std::vector<G1Elem*> targets;
  for (auto& p : points) {
    if (blst_p1_is_inf(&p.p_)) continue;
    jacobian.push_back(&p.p_);
    targets.push_back(&p);
  }
  if (jacobian.empty()) return;
  std::vector<blst_p1_affine> affine(jacobian.size());
  blst_p1s_to_affine(affine.data(), jacobian.data(), jacobian.size());
  for (std::size_t i = 0; i < affine.size(); ++i) {
    blst_p1_from_affine(&targets[i]->p_, &affine[i]);
  }
}

G1Elem G1Elem::pow(const Scalar& e) const {
  bump(&OpCounter::exp_g1);
  return G1Elem(mult_raw(p_, e));
}

G1Elem G1Elem::inverse() const {
  blst_p1 out = p_;
  blst_p1_cneg(&out, true);
  return G1Elem(out);
}

bool operator==(const G1Elem& a, const G1Elem& b) {
  return blst_p1_is_equal(&a.p_, &b.p_);
}

// ---------------------------------------------------------------- G2

G2Elem::G2Elem() { std::memset(&p_, 0, sizeof(p_)); }

G2Elem G2Elem::generator() { return G2Elem(*blst_p2_generator()); }

std::optional<G2Elem> G2Elem::from_bytes(std::span<const std::uint8_t> in,
                                         PointError* error) {
  auto fail = [&](PointError e) -> std::optional<G2Elem> {
    if (error) *error = e;
    return std::nullopt;
  };
  if (in.size() != kBytes) return fail(PointError::kBadEncoding);
  blst_p2_affine aff;
  switch (blst_p2_uncompress(&aff, in.data())) {
    case BLST_SUCCESS:
      break;
    case BLST_POINT_NOT_ON_CURVE:
      return fail(PointError::kNotOnCurve);
    default:
      return fail(PointError::kBadEncoding);
  }
  if (!blst_p2_affine_in_g2(&aff)) return fail(PointError::kNotInSubgroup);
  blst_p2 p;
  blst_p2_from_affine(&p, &aff);
  G2Elem out(p);
  const auto again = out.to_bytes();
  if (!std::equal(again.begin(), again.end(), in.begin())) {
    return fail(PointError::kBadEncoding);
  }
  if (error) *error = PointError::kNone;
  return out;
}

std::array<std::uint8_t, G2Elem::kBytes> G2Elem::to_bytes() const {
  std::array<std::uint8_t, kBytes> out;
  blst_p2_compress(out.data(), &p_);
  return out;
}

bool G2Elem::is_identity() const { return blst_p2_is_inf(&p_); }
bool G2Elem::in_subgroup() const { return blst_p2_in_g2(&p_); }

G2Elem G2Elem::operator*(const G2Elem& o) const {
  bump(&OpCounter::mul_g2);
  blst_p2 out;
  blst_p2_add_or_double(&out, &p_, &o.p_);
  return G2Elem(out);
}

G2Elem& G2Elem::operator*=(const G2Elem& o) { return *this = *this * o; }

G2Elem G2Elem::pow(const Scalar& e) const {
  bump(&OpCounter::exp_g2);
  return G2Elem(mult_raw(p_, e));
}

G2Elem G2Elem::inverse() const {
  blst_p2 out = p_;
  blst_p2_cneg(&out, true);
  return G2Elem(out);
}

bool operator==(const G2Elem& a, const G2Elem& b) {
  return blst_p2_is_equal(&a.p_, &b.p_);
}

// ---------------------------------------------------------------- GT

GtElem::GtElem() : f_(*blst_fp12_one()) {}

std::optional<GtElem> GtElem::from_bytes(std::span<const std::uint8_t> in,
                                         PointError* error) {
  auto fail = [&](PointError e) -> std::optional<GtElem> {
    if (error) *error = e;
    return std::nullopt;
  };
  if (in.size() != kBytes) return fail(PointError::kBadEncoding);
  blst_fp12 f;
  const std::uint8_t* cursor = in.data();
  // Same coefficient order as blst_bendian_from_fp12.
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        blst_fp& c = f.fp6[j].fp2[i].fp[k];
        blst_fp_from_bendian(&c, cursor);
        std::array<std::uint8_t, 48> again;
        blst_bendian_from_fp(again.data(), &c);
        if (!std::equal(again.begin(), again.end(), cursor)) {
          return fail(PointError::kBadEncoding);
        }
        cursor += 48;
      }
    }
  }
  if (!blst_fp12_in_group(&f)) return fail(PointError::kNotInSubgroup);
  if (error) *error = PointError::kNone;
  return GtElem(f);
}

Bytes GtElem::to_bytes() const {
  Bytes out(kBytes);
  blst_bendian_from_fp12(out.data(), &f_);
  return out;
}

bool GtElem::is_identity() const { return blst_fp12_is_one(&f_); }
bool GtElem::in_subgroup() const { return blst_fp12_in_group(&f_); }

GtElem GtElem::operator*(const GtElem& o) const {
  bump(&OpCounter::mul_gt);
  blst_fp12 out;
  blst_fp12_mul(&out, &f_, &o.f_);
  return GtElem(out);
}

GtElem& GtElem::operator*=(const GtElem& o) { return *this = *this * o; }

GtElem GtElem::operator/(const GtElem& o) const { return *this * o.inverse(); }

GtElem GtElem::pow(const Scalar& e) const {
  bump(&OpCounter::exp_gt);
  return GtElem(pow_raw(f_, e));
}

// Unitary elements: the inverse is the conjugate.
GtElem GtElem::inverse() const {
  blst_fp12 out = f_;
  blst_fp12_conjugate(&out);
  return GtElem(out);
}

bool operator==(const GtElem& a, const GtElem& b) {
  return blst_fp12_is_equal(&a.f_, &b.f_);
}

// ---------------------------------------------------------------- hashing

std::string_view hash_tag_name(HashTag tag) {
  switch (tag) {
    case HashTag::kAnchor:
      return "ANCHOR";
    case HashTag::kAttr:
      return "ATTR";
    case HashTag::kChecksumPhi:
      return "CHECKSUM_PHI";
    case HashTag::kChecksumVarphi:
      return "CHECKSUM_VARPHI";
  }
  return "UNKNOWN";
}

Scalar hash_to_scalar_attempt(std::string_view dst,
                              std::span<const std::uint8_t> data,
                              unsigned attempt) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(
      EVP_MD_CTX_new(), EVP_MD_CTX_free);
  std::array<std::uint8_t, 64> digest;
  unsigned int len = 0;
  const std::uint8_t counter = static_cast<std::uint8_t>(attempt);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha512(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), dst.data(), dst.size()) != 1 ||
      EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
      (attempt > 0 && EVP_DigestUpdate(ctx.get(), &counter, 1) != 1) ||
      EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1) {
    throw std::runtime_error("SHA-512 failed");
  }
  return Scalar::reduce_be(digest);
}

// ---------------------------------------------------------------- env

GroupEnv::GroupEnv()
    : g1_(G1Elem::generator()),
      g2_(G2Elem::generator()),
      gt_(pair_raw(g1_.raw(), g2_.raw())) {}

const GroupEnv& GroupEnv::bls12_381() {
  static const GroupEnv env;
  return env;
}

const GroupEnv& GroupEnv::by_name(std::string_view name) {
  std::string norm;
  for (char c : name) {
    if (c == '-' || c == '_') continue;
    norm.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (norm == "bls12381") return bls12_381();
  throw std::invalid_argument("unsupported curve: " + std::string(name));
}

std::array<std::uint8_t, 32> GroupEnv::order_bytes() const { return kOrder; }

GtElem GroupEnv::pair(const G1Elem& a, const G2Elem& b) const {
  bump(&OpCounter::pairings);
  return GtElem(pair_raw(a.raw(), b.raw()));
}

GtElem GroupEnv::multi_pair(
    std::span<const std::pair<G1Elem, G2Elem>> pairs) const {
  if (pairs.empty()) {
    throw std::invalid_argument("multi_pair requires at least one pair");
  }
  bump(&OpCounter::pairings, pairs.size());
  bump(&OpCounter::mul_gt, pairs.size() - 1);

  std::vector<blst_p1_affine> ps;
  std::vector<blst_p2_affine> qs;
  ps.reserve(pairs.size());
  qs.reserve(pairs.size());
  for (const auto& [a, b] : pairs) {
    if (a.is_identity() || b.is_identity()) continue;
    blst_p1_affine pa;
    blst_p2_affine qb;
    blst_p1_to_affine(&pa, &a.raw());
    blst_p2_to_affine(&qb, &b.raw());
    ps.push_back(pa);
    qs.push_back(qb);
  }
  if (ps.empty()) return GtElem();

  std::vector<const blst_p1_affine*> pp;
  std::vector<const blst_p2_affine*> qp;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    pp.push_back(&ps[i]);
    qp.push_back(&qs[i]);
  }
  blst_fp12 ml, out;
  blst_miller_loop_n(&ml, qp.data(), pp.data(), ps.size());
  blst_final_exp(&out, &ml);
  return GtElem(out);
}

std::string GroupEnv::g1_dst(HashTag tag) const {
  return "RFABE-V01-" + std::string(hash_tag_name(tag)) + "-with-" +
         std::string(g1_hash_suite());
}

G1Elem GroupEnv::hash_to_g1(HashTag tag,
                            std::span<const std::uint8_t> data) const {
  bump(&OpCounter::hashes);
  const std::string dst = g1_dst(tag);
  blst_p1 out;
  blst_hash_to_g1(&out, data.data(), data.size(),
                  reinterpret_cast<const std::uint8_t*>(dst.data()),
                  dst.size(), nullptr, 0);
  return G1Elem(out);
}

Scalar GroupEnv::hash_to_scalar(std::span<const std::uint8_t> data) const {
  bump(&OpCounter::hashes);
  for (unsigned attempt = 0;; ++attempt) {
    Scalar s = hash_to_scalar_attempt(scalar_dst(), data, attempt);
    if (!s.is_zero()) return s;
  }
}

G1Elem GroupEnv::random_g1(RandomSource& rng) const {
  bump(&OpCounter::samples);
  return G1Elem(mult_raw(g1_.raw(), Scalar::random_nonzero(rng)));
}

G2Elem GroupEnv::random_g2(RandomSource& rng) const {
  bump(&OpCounter::samples);
  return G2Elem(mult_raw(g2_.raw(), Scalar::random_nonzero(rng)));
}

GtElem GroupEnv::random_gt(RandomSource& rng) const {
  bump(&OpCounter::samples);
  return GtElem(pow_raw(gt_.raw(), Scalar::random_nonzero(rng)));
}

}  // namespace rfabe
