#include "rfabe/codec.h"

#include <algorithm>

namespace rfabe {
namespace {

constexpr std::uint8_t kMagic[4] = {'R', 'F', 'A', 'B'};
constexpr std::size_t kHeaderBytes = 6;

class Writer {
 public:
  explicit Writer(ArtifactKind kind) {
    out_.assign(std::begin(kMagic), std::end(kMagic));
    out_.push_back(kCodecVersion);
    out_.push_back(static_cast<std::uint8_t>(kind));
  }

  void u32(std::size_t v) {
    if (v > 0xffffffffu) throw std::length_error("count exceeds 32 bits");
    for (int shift = 24; shift >= 0; shift -= 8) {
      out_.push_back(static_cast<std::uint8_t>(v >> shift));
    }
  }
  void raw(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }
  void str(std::string_view s) {
    u32(s.size());
    raw(as_bytes(s));
  }
  void scalar(const Scalar& s) { raw(s.to_bytes()); }
  void g1(const G1Elem& p) { raw(p.to_bytes()); }
  void g2(const G2Elem& p) { raw(p.to_bytes()); }
  void gt(const GtElem& p) { raw(p.to_bytes()); }

  template <typename T, typename F>
  void list(const std::vector<T>& items, F each) {
    u32(items.size());
    for (const auto& x : items) (this->*each)(x);
  }

  void policy(const MspPolicy& m) {
    u32(m.rows());
    u32(m.cols());
    for (const auto& s : m.entries()) scalar(s);
    for (const auto& a : m.labels()) str(a);
  }

  Bytes take() && { return std::move(out_); }

 private:
  Bytes out_;
};

class Reader {
 public:
  Reader(std::span<const std::uint8_t> in, ArtifactKind expected)
      : Reader(in) {
    if (kind_ != expected) {
      throw DecodeError(DecodeErrorCode::kBadKind,
                        "expected " + std::string(kind_label(expected)) +
                            " envelope, found " + std::string(kind_label(kind_)));
    }
  }

  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {
    if (in_.size() < kHeaderBytes) {
      throw DecodeError(DecodeErrorCode::kTruncated, "envelope header truncated");
    }
    if (!std::equal(std::begin(kMagic), std::end(kMagic), in_.begin())) {
      throw DecodeError(DecodeErrorCode::kBadMagic, "not an RFAB envelope");
    }
    if (in_[4] != kCodecVersion) {
      throw DecodeError(DecodeErrorCode::kBadVersion,
                        "unsupported envelope version " + std::to_string(in_[4]));
    }
    if (in_[5] < 1 || in_[5] > 7) {
      throw DecodeError(DecodeErrorCode::kBadKind,
                        "unknown artifact kind " + std::to_string(in_[5]));
    }
    kind_ = static_cast<ArtifactKind>(in_[5]);
    pos_ = kHeaderBytes;
  }

  ArtifactKind kind() const { return kind_; }

  std::span<const std::uint8_t> raw(std::size_t n) {
    if (in_.size() - pos_ < n) {
      throw DecodeError(DecodeErrorCode::kTruncated, "body truncated");
    }
    auto out = in_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

  std::uint32_t u32() {
    auto b = raw(4);
    return std::uint32_t{b[0]} << 24 | std::uint32_t{b[1]} << 16 |
           std::uint32_t{b[2]} << 8 | std::uint32_t{b[3]};
  }

  // A count of items that each take at least `min_item` bytes; rejecting
  // impossible counts early avoids huge allocations on garbage input.
  std::size_t count(std::size_t min_item) {
    const std::size_t n = u32();
    if (min_item > 0 && n > (in_.size() - pos_) / min_item) {
      throw DecodeError(DecodeErrorCode::kTruncated, "count exceeds remaining bytes");
    }
    return n;
  }

  std::string str() {
    const std::size_t n = count(1);
    auto b = raw(n);
    return std::string(b.begin(), b.end());
  }

  Scalar scalar() {
    auto s = Scalar::from_bytes(raw(Scalar::kBytes));
    if (!s) throw DecodeError(DecodeErrorCode::kInvalidValue, "scalar not reduced");
    return *s;
  }

  template <typename P>
  P point() {
    PointError err = PointError::kNone;
    auto p = P::from_bytes(raw(P::kBytes), &err);
    if (!p) throw DecodeError(DecodeErrorCode::kBadPoint, point_error(err));
    return *p;
  }
  G1Elem g1() { return point<G1Elem>(); }
  G2Elem g2() { return point<G2Elem>(); }
  GtElem gt() { return point<GtElem>(); }

  std::vector<G1Elem> g1_list() { return list<G1Elem>(G1Elem::kBytes, &Reader::g1); }
  std::vector<G2Elem> g2_list() { return list<G2Elem>(G2Elem::kBytes, &Reader::g2); }
  std::vector<Scalar> scalar_list() {
    return list<Scalar>(Scalar::kBytes, &Reader::scalar);
  }

  MspPolicy policy() {
    const std::size_t rows = u32();
    const std::size_t cols = u32();
    if (rows == 0 || cols == 0) {
      throw DecodeError(DecodeErrorCode::kInvalidValue, "empty policy matrix");
    }
    if (rows > (in_.size() - pos_) / Scalar::kBytes / cols) {
      throw DecodeError(DecodeErrorCode::kTruncated, "policy matrix truncated");
    }
    std::vector<Scalar> entries;
    entries.reserve(rows * cols);
    for (std::size_t i = 0; i < rows * cols; ++i) entries.push_back(scalar());
    std::vector<std::string> labels;
    labels.reserve(rows);
    for (std::size_t i = 0; i < rows; ++i) labels.push_back(str());
    try {
      return MspPolicy(rows, cols, std::move(entries), std::move(labels));
    } catch (const std::invalid_argument& e) {
      throw DecodeError(DecodeErrorCode::kInvalidValue, e.what());
    }
  }

  void finish() const {
    if (pos_ != in_.size()) {
      throw DecodeError(DecodeErrorCode::kLengthMismatch,
                        std::to_string(in_.size() - pos_) + " trailing bytes");
    }
  }

 private:
  static std::string point_error(PointError err) {
    switch (err) {
      case PointError::kNotOnCurve:
        return "point not on curve";
      case PointError::kNotInSubgroup:
        return "point not in prime-order subgroup";
      default:
        return "malformed point encoding";
    }
  }

  template <typename T>
  std::vector<T> list(std::size_t item_bytes, T (Reader::*read)()) {
    const std::size_t n = count(item_bytes);
    std::vector<T> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back((this->*read)());
    return out;
  }

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
  ArtifactKind kind_{};
};

void require(bool ok, DecodeErrorCode code, const char* what) {
  if (!ok) throw DecodeError(code, what);
}

}  // namespace

std::string_view kind_label(ArtifactKind kind) {
  switch (kind) {
    case ArtifactKind::kPublicParams:
      return "PP";
    case ArtifactKind::kMasterSecretKey:
      return "MSK";
    case ArtifactKind::kSecretKey:
      return "SK";
    case ArtifactKind::kCiphertext:
      return "CT";
    case ArtifactKind::kRevokedCiphertext:
      return "CTREV";
    case ArtifactKind::kDelegation:
      return "DG";
    case ArtifactKind::kOwnerState:
      return "STATE";
  }
  return "?";
}

std::string_view decode_error_name(DecodeErrorCode code) {
  switch (code) {
    case DecodeErrorCode::kTruncated:
      return "truncated";
    case DecodeErrorCode::kBadMagic:
      return "bad-magic";
    case DecodeErrorCode::kBadVersion:
      return "bad-version";
    case DecodeErrorCode::kBadKind:
      return "bad-kind";
    case DecodeErrorCode::kBadPoint:
      return "bad-point";
    case DecodeErrorCode::kLengthMismatch:
      return "length-mismatch";
    case DecodeErrorCode::kInvalidValue:
      return "invalid-value";
  }
  return "?";
}

DecodeError::DecodeError(DecodeErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(decode_error_name(code)) + ": " + detail),
      code_(code) {}

Bytes encode(const PublicParams& pp) {
  Writer w(ArtifactKind::kPublicParams);
  w.str(pp.group().curve_id());
  w.str(pp.group().g1_hash_suite());
  w.str(pp.group().scalar_hash_suite());
  w.g1(pp.csum_base_msg);
  w.g1(pp.csum_base_companion);
  w.gt(pp.mpk);
  return std::move(w).take();
}

Bytes encode(const MasterSecretKey& msk) {
  Writer w(ArtifactKind::kMasterSecretKey);
  w.scalar(msk.alpha);
  return std::move(w).take();
}

Bytes encode(const SecretKey& sk) {
  Writer w(ArtifactKind::kSecretKey);
  w.g1(sk.master_part);
  w.u32(sk.attribute_parts.size());
  for (const auto& [attr, part] : sk.attribute_parts) {
    w.str(attr);
    w.g1(part);
  }
  w.g2(sk.randomizer);
  return std::move(w).take();
}

Bytes encode(const Ciphertext& ct) {
  Writer w(ct.revocation_depth == 0 ? ArtifactKind::kCiphertext
                                    : ArtifactKind::kRevokedCiphertext);
  w.policy(ct.policy);
  w.g2(ct.share_g2);
  w.list(ct.reuse_g2, &Writer::g2);
  w.list(ct.rows, &Writer::g1);
  w.gt(ct.blinded_msg);
  w.gt(ct.blinded_companion);
  w.g1(ct.checksum);
  w.u32(ct.revocation_depth);
  return std::move(w).take();
}

Bytes encode(const Delegation& dg) {
  Writer w(ArtifactKind::kDelegation);
  w.policy(dg.added_policy);
  w.list(dg.added_rows, &Writer::g1);
  w.list(dg.reuse_update, &Writer::g2);
  w.list(dg.reuse_extension, &Writer::g2);
  w.policy(dg.base_policy);
  w.u32(dg.base_depth);
  w.list(dg.reuse_exponents, &Writer::scalar);
  return std::move(w).take();
}

Bytes encode(const OwnerState& state) {
  Writer w(ArtifactKind::kOwnerState);
  w.policy(state.policy);
  w.list(state.reuse_exponents, &Writer::scalar);
  w.u32(state.revocation_depth);
  return std::move(w).take();
}

ArtifactKind peek_kind(std::span<const std::uint8_t> bytes) {
  return Reader(bytes).kind();
}

PublicParams decode_public_params(std::span<const std::uint8_t> bytes) {
  Reader r(bytes, ArtifactKind::kPublicParams);
  const std::string curve = r.str();
  const GroupEnv* env = nullptr;
  try {
    env = &GroupEnv::by_name(curve);
  } catch (const std::invalid_argument&) {
    throw DecodeError(DecodeErrorCode::kInvalidValue, "unsupported curve " + curve);
  }
  require(r.str() == env->g1_hash_suite(), DecodeErrorCode::kInvalidValue,
          "unsupported hash-to-curve suite");
  require(r.str() == env->scalar_hash_suite(), DecodeErrorCode::kInvalidValue,
          "unsupported hash-to-scalar suite");
  PublicParams pp;
  pp.env = env;
  pp.csum_base_msg = r.g1();
  pp.csum_base_companion = r.g1();
  pp.mpk = r.gt();
  r.finish();
  require(!pp.mpk.is_identity(), DecodeErrorCode::kInvalidValue, "mpk is the identity");
  return pp;
}

MasterSecretKey decode_master_secret_key(std::span<const std::uint8_t> bytes) {
  Reader r(bytes, ArtifactKind::kMasterSecretKey);
  MasterSecretKey msk{r.scalar()};
  r.finish();
  require(!msk.alpha.is_zero(), DecodeErrorCode::kInvalidValue, "zero master secret");
  return msk;
}

SecretKey decode_secret_key(std::span<const std::uint8_t> bytes) {
  Reader r(bytes, ArtifactKind::kSecretKey);
  SecretKey sk;
  sk.master_part = r.g1();
  const std::size_t n = r.count(4 + G1Elem::kBytes);
  require(n > 0, DecodeErrorCode::kInvalidValue, "key holds no attributes");
  std::string previous;
  for (std::size_t i = 0; i < n; ++i) {
    std::string attr = r.str();
    require(is_valid_attribute(attr), DecodeErrorCode::kInvalidValue,
            "invalid attribute in key");
    require(i == 0 || previous < attr, DecodeErrorCode::kInvalidValue,
            "key attributes not in canonical order");
    G1Elem part = r.g1();
    previous = attr;
    sk.attribute_parts.emplace(std::move(attr), part);
  }
  sk.randomizer = r.g2();
  r.finish();
  return sk;
}

Ciphertext decode_ciphertext(std::span<const std::uint8_t> bytes) {
  const ArtifactKind kind = peek_kind(bytes);
  require(kind == ArtifactKind::kCiphertext || kind == ArtifactKind::kRevokedCiphertext,
          DecodeErrorCode::kBadKind, "expected CT or CTREV envelope");
  Reader r(bytes, kind);
  Ciphertext ct{.policy = r.policy()};
  ct.share_g2 = r.g2();
  ct.reuse_g2 = r.g2_list();
  ct.rows = r.g1_list();
  ct.blinded_msg = r.gt();
  ct.blinded_companion = r.gt();
  ct.checksum = r.g1();
  ct.revocation_depth = r.u32();
  r.finish();
  require(ct.rows.size() == ct.policy.rows(), DecodeErrorCode::kLengthMismatch,
          "row count does not match policy");
  require(ct.reuse_g2.size() >= ct.policy.max_reuse(), DecodeErrorCode::kLengthMismatch,
          "reuse vector shorter than policy reuse bound");
  require((ct.revocation_depth == 0) == (kind == ArtifactKind::kCiphertext),
          DecodeErrorCode::kInvalidValue, "revocation depth contradicts envelope kind");
  return ct;
}

Delegation decode_delegation(std::span<const std::uint8_t> bytes) {
  Reader r(bytes, ArtifactKind::kDelegation);
  MspPolicy added = r.policy();
  auto added_rows = r.g1_list();
  auto reuse_update = r.g2_list();
  auto reuse_extension = r.g2_list();
  Delegation dg{.added_policy = std::move(added), .base_policy = r.policy()};
  dg.added_rows = std::move(added_rows);
  dg.reuse_update = std::move(reuse_update);
  dg.reuse_extension = std::move(reuse_extension);
  dg.base_depth = r.u32();
  dg.reuse_exponents = r.scalar_list();
  r.finish();
  require(dg.added_rows.size() == dg.added_policy.rows(),
          DecodeErrorCode::kLengthMismatch, "delegation row count mismatch");
  require(dg.reuse_update.size() == dg.reuse_exponents.size() &&
              dg.reuse_extension.size() <= dg.reuse_update.size(),
          DecodeErrorCode::kLengthMismatch, "delegation reuse vectors mismatch");
  return dg;
}

OwnerState decode_owner_state(std::span<const std::uint8_t> bytes) {
  Reader r(bytes, ArtifactKind::kOwnerState);
  OwnerState state{.policy = r.policy()};
  state.reuse_exponents = r.scalar_list();
  state.revocation_depth = r.u32();
  r.finish();
  require(state.reuse_exponents.size() >= state.policy.max_reuse(),
          DecodeErrorCode::kLengthMismatch, "reuse vector shorter than policy reuse bound");
  return state;
}

}  // namespace rfabe
