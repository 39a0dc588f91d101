#ifndef RFABE_KEM_H_
#define RFABE_KEM_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>

#include "rfabe/groups.h"
#include "rfabe/rng.h"
#include "rfabe/scheme.h"

namespace rfabe {

using SessionKey = std::array<std::uint8_t, 32>;

// HKDF-SHA256 over the canonical encoding of a GT element.
SessionKey derive_session_key(std::span<const std::uint8_t> gt_bytes);

struct KemResult {
  SessionKey session_key;
  GtElem msg;  // encrypt this under the ABE scheme
};
KemResult kem_wrap(const PublicParams& pp, RandomSource& rng);
SessionKey kem_unwrap(const GtElem& msg);

// Payload file layout:
//   "RFPL" | version (1) | DEM id (1 = ChaCha20-Poly1305) | nonce (12)
//   | ciphertext | tag (16)
// The 18-byte header is bound as associated data.
class PayloadError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Bytes seal_payload(const SessionKey& key, std::span<const std::uint8_t> plaintext,
                   RandomSource& rng);
// Throws PayloadError on a malformed header; returns nullopt when the
// authentication tag does not verify.
std::optional<Bytes> open_payload(const SessionKey& key,
                                  std::span<const std::uint8_t> sealed);

}  // namespace rfabe

#endif  // RFABE_KEM_H_
