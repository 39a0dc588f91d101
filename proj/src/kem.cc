#include "rfabe/kem.h"

#include <openssl/evp.h>
#include <openssl/kdf.h>

#include <memory>
#include <string_view>

namespace rfabe {
namespace {

constexpr std::string_view kKdfInfo = "RFABE-V01-KEM-HKDF-SHA256";
constexpr std::uint8_t kPayloadMagic[4] = {'R', 'F', 'P', 'L'};
constexpr std::uint8_t kPayloadVersion = 1;
constexpr std::uint8_t kDemChaCha20Poly1305 = 1;
constexpr std::size_t kNonceBytes = 12;
constexpr std::size_t kTagBytes = 16;
constexpr std::size_t kHeaderBytes = 4 + 1 + 1 + kNonceBytes;

struct CtxFree {
  void operator()(EVP_PKEY_CTX* c) const { EVP_PKEY_CTX_free(c); }
  void operator()(EVP_CIPHER_CTX* c) const { EVP_CIPHER_CTX_free(c); }
};

void check(int ok, const char* what) {
  if (ok <= 0) throw std::runtime_error(std::string("OpenSSL failure: ") + what);
}

}  // namespace

SessionKey derive_session_key(std::span<const std::uint8_t> gt_bytes) {
  std::unique_ptr<EVP_PKEY_CTX, CtxFree> ctx(
      EVP_PKEY_CTX_new_id(EVP_PKEY_HKDF, nullptr));
  check(ctx != nullptr, "HKDF context");
  check(EVP_PKEY_derive_init(ctx.get()), "HKDF init");
  check(EVP_PKEY_CTX_set_hkdf_md(ctx.get(), EVP_sha256()), "HKDF digest");
  check(EVP_PKEY_CTX_set1_hkdf_key(ctx.get(), gt_bytes.data(),
                                   static_cast<int>(gt_bytes.size())),
        "HKDF key");
  check(EVP_PKEY_CTX_add1_hkdf_info(
            ctx.get(), reinterpret_cast<const unsigned char*>(kKdfInfo.data()),
            static_cast<int>(kKdfInfo.size())),
        "HKDF info");
  SessionKey out;
  std::size_t len = out.size();
  check(EVP_PKEY_derive(ctx.get(), out.data(), &len), "HKDF derive");
  return out;
}

KemResult kem_wrap(const PublicParams& pp, RandomSource& rng) {
  GtElem msg = pp.group().random_gt(rng);
  return {kem_unwrap(msg), std::move(msg)};
}

SessionKey kem_unwrap(const GtElem& msg) {
  return derive_session_key(msg.to_bytes());
}

Bytes seal_payload(const SessionKey& key, std::span<const std::uint8_t> plaintext,
                   RandomSource& rng) {
  Bytes out(kHeaderBytes + plaintext.size() + kTagBytes);
  std::copy(std::begin(kPayloadMagic), std::end(kPayloadMagic), out.begin());
  out[4] = kPayloadVersion;
  out[5] = kDemChaCha20Poly1305;
  rng.fill(std::span(out).subspan(6, kNonceBytes));

  std::unique_ptr<EVP_CIPHER_CTX, CtxFree> ctx(EVP_CIPHER_CTX_new());
  check(ctx != nullptr, "cipher context");
  check(EVP_EncryptInit_ex(ctx.get(), EVP_chacha20_poly1305(), nullptr,
                           key.data(), out.data() + 6),
        "seal init");
  int len = 0;
  check(EVP_EncryptUpdate(ctx.get(), nullptr, &len, out.data(),
                          static_cast<int>(kHeaderBytes)),
        "seal aad");
  if (!plaintext.empty()) {
    check(EVP_EncryptUpdate(ctx.get(), out.data() + kHeaderBytes, &len,
                            plaintext.data(), static_cast<int>(plaintext.size())),
          "seal update");
  }
  check(EVP_EncryptFinal_ex(ctx.get(), nullptr, &len), "seal final");
  check(EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_AEAD_GET_TAG,
                            static_cast<int>(kTagBytes),
                            out.data() + kHeaderBytes + plaintext.size()),
        "seal tag");
  return out;
}

std::optional<Bytes> open_payload(const SessionKey& key,
                                  std::span<const std::uint8_t> sealed) {
  if (sealed.size() < kHeaderBytes + kTagBytes) {
    throw PayloadError("payload truncated");
  }
  if (!std::equal(std::begin(kPayloadMagic), std::end(kPayloadMagic),
                  sealed.begin())) {
    throw PayloadError("payload has bad magic");
  }
  if (sealed[4] != kPayloadVersion) throw PayloadError("unsupported payload version");
  if (sealed[5] != kDemChaCha20Poly1305) throw PayloadError("unknown DEM identifier");

  const std::size_t body = sealed.size() - kHeaderBytes - kTagBytes;
  Bytes out(body);
  std::unique_ptr<EVP_CIPHER_CTX, CtxFree> ctx(EVP_CIPHER_CTX_new());
  check(ctx != nullptr, "cipher context");
  check(EVP_DecryptInit_ex(ctx.get(), EVP_chacha20_poly1305(), nullptr,
                           key.data(), sealed.data() + 6),
        "open init");
  int len = 0;
  check(EVP_DecryptUpdate(ctx.get(), nullptr, &len, sealed.data(),
                          static_cast<int>(kHeaderBytes)),
        "open aad");
  if (body > 0) {
    check(EVP_DecryptUpdate(ctx.get(), out.data(), &len,
                            sealed.data() + kHeaderBytes, static_cast<int>(body)),
          "open update");
  }
  Bytes tag(sealed.end() - kTagBytes, sealed.end());
  check(EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_AEAD_SET_TAG,
                            static_cast<int>(kTagBytes), tag.data()),
        "open tag");
  if (EVP_DecryptFinal_ex(ctx.get(), nullptr, &len) <= 0) return std::nullopt;
  return out;
}

}  // namespace rfabe
