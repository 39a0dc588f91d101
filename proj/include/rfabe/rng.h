#ifndef RFABE_RNG_H_
#define RFABE_RNG_H_

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

namespace rfabe {

// Source of uniformly random bytes. Every probabilistic operation in the
// library draws from one of these, so tests can swap in a seeded stream.
class RandomSource {
 public:
  virtual ~RandomSource() = default;
  virtual void fill(std::span<std::uint8_t> out) = 0;
};

// Operating-system entropy (OpenSSL RAND_bytes).
class SystemRandom final : public RandomSource {
 public:
  void fill(std::span<std::uint8_t> out) override;
};

// ChaCha20 keystream keyed by SHA-256(label || seed). Reproducible and
// therefore insecure for real keys; meant for tests and benchmarks.
class DeterministicRandom final : public RandomSource {
 public:
  explicit DeterministicRandom(std::uint64_t seed,
                               std::string_view label = "rfabe-drbg");
  void fill(std::span<std::uint8_t> out) override;

 private:
  void refill();

  std::array<std::uint8_t, 32> key_{};
  std::uint64_t block_counter_ = 0;
  std::array<std::uint8_t, 64 * 16> buffer_{};
  std::size_t offset_ = sizeof(buffer_);
};

}  // namespace rfabe

#endif  // RFABE_RNG_H_
