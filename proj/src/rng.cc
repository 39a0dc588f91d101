#include "rfabe/rng.h"

#include <openssl/evp.h>
#include <openssl/rand.h>
#include <openssl/sha.h>

#include <algorithm>
#include <cstring>
#include <memory>
#include <stdexcept>
#include <vector>

namespace rfabe {

void SystemRandom::fill(std::span<std::uint8_t> out) {
  if (out.empty()) return;
  if (RAND_bytes(out.data(), static_cast<int>(out.size())) != 1) {
    throw std::runtime_error("RAND_bytes failed");
  }
}

DeterministicRandom::DeterministicRandom(std::uint64_t seed,
                                         std::string_view label) {
  std::vector<std::uint8_t> material(label.begin(), label.end());
  for (int i = 7; i >= 0; --i) {
    material.push_back(static_cast<std::uint8_t>(seed >> (8 * i)));
  }
  SHA256(material.data(), material.size(), key_.data());
}

void DeterministicRandom::refill() {
  // 16-byte ChaCha20 IV for OpenSSL: 4-byte little-endian block counter
  // followed by the 12-byte nonce. The counter advances per refill so the
  // stream never repeats.
  std::array<std::uint8_t, 16> iv{};
  const std::uint64_t blocks = block_counter_;
  for (int i = 0; i < 8; ++i) {
    iv[4 + i] = static_cast<std::uint8_t>(blocks >> (8 * i));
  }
  block_counter_ += 1;

  std::unique_ptr<EVP_CIPHER_CTX, decltype(&EVP_CIPHER_CTX_free)> ctx(
      EVP_CIPHER_CTX_new(), EVP_CIPHER_CTX_free);
  if (!ctx ||
      EVP_EncryptInit_ex(ctx.get(), EVP_chacha20(), nullptr, key_.data(),
                         iv.data()) != 1) {
    throw std::runtime_error("chacha20 init failed");
  }
  std::array<std::uint8_t, sizeof(buffer_)> zeros{};
  int produced = 0;
  if (EVP_EncryptUpdate(ctx.get(), buffer_.data(), &produced, zeros.data(),
                        static_cast<int>(zeros.size())) != 1 ||
      produced != static_cast<int>(buffer_.size())) {
    throw std::runtime_error("chacha20 keystream failed");
  }
  offset_ = 0;
}

void DeterministicRandom::fill(std::span<std::uint8_t> out) {
  std::size_t written = 0;
  while (written < out.size()) {
    if (offset_ == buffer_.size()) refill();
    const std::size_t take =
        std::min(out.size() - written, buffer_.size() - offset_);
    std::memcpy(out.data() + written, buffer_.data() + offset_, take);
    offset_ += take;
    written += take;
  }
}

}  // namespace rfabe
