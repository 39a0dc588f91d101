#ifndef RFABE_CODEC_H_
#define RFABE_CODEC_H_

// Versioned binary envelope for every artifact:
//   "RFAB" | version 0x01 | kind | body
// Points use the compressed encoding, scalars 32-byte big-endian, counts
// and string lengths 4-byte big-endian.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "rfabe/groups.h"
#include "rfabe/revocation.h"
#include "rfabe/scheme.h"

namespace rfabe {

enum class ArtifactKind : std::uint8_t {
  kPublicParams = 1,
  kMasterSecretKey = 2,
  kSecretKey = 3,
  kCiphertext = 4,
  kRevokedCiphertext = 5,
  kDelegation = 6,
  kOwnerState = 7,
};
// "PP", "MSK", "SK", "CT", "CTREV", "DG", "STATE"
std::string_view kind_label(ArtifactKind kind);

enum class DecodeErrorCode {
  kTruncated,
  kBadMagic,
  kBadVersion,
  kBadKind,
  kBadPoint,
  kLengthMismatch,
  kInvalidValue,
};
std::string_view decode_error_name(DecodeErrorCode code);

class DecodeError : public std::runtime_error {
 public:
  DecodeError(DecodeErrorCode code, const std::string& detail);
  DecodeErrorCode code() const { return code_; }

 private:
  DecodeErrorCode code_;
};

inline constexpr std::uint8_t kCodecVersion = 1;

Bytes encode(const PublicParams& pp);
Bytes encode(const MasterSecretKey& msk);
Bytes encode(const SecretKey& sk);
// Kind is CT for depth 0 and CTREV otherwise.
Bytes encode(const Ciphertext& ct);
Bytes encode(const Delegation& dg);
Bytes encode(const OwnerState& state);

// Reads the envelope header; throws DecodeError if it is malformed.
ArtifactKind peek_kind(std::span<const std::uint8_t> bytes);

PublicParams decode_public_params(std::span<const std::uint8_t> bytes);
MasterSecretKey decode_master_secret_key(std::span<const std::uint8_t> bytes);
SecretKey decode_secret_key(std::span<const std::uint8_t> bytes);
// Accepts both CT and CTREV envelopes.
Ciphertext decode_ciphertext(std::span<const std::uint8_t> bytes);
Delegation decode_delegation(std::span<const std::uint8_t> bytes);
OwnerState decode_owner_state(std::span<const std::uint8_t> bytes);

// Text form:
//   -----BEGIN RFAB-<KIND>-----
//   base64, 64 columns
//   -----END RFAB-<KIND>-----
std::string armor(std::span<const std::uint8_t> envelope);
// Ignores whitespace inside and around the armor; checks that the label
// matches the envelope kind. Throws DecodeError.
Bytes dearmor(std::string_view text);

}  // namespace rfabe

#endif  // RFABE_CODEC_H_
