#include <openssl/evp.h>

#include <cctype>

#include "rfabe/codec.h"

namespace rfabe {
namespace {

constexpr std::string_view kDashes = "-----";
constexpr std::size_t kLineWidth = 64;

std::string base64(std::span<const std::uint8_t> in) {
  std::string out(4 * ((in.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                in.data(), static_cast<int>(in.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

Bytes unbase64(const std::string& in) {
  if (in.size() % 4 != 0) {
    throw DecodeError(DecodeErrorCode::kInvalidValue, "base64 length not a multiple of 4");
  }
  for (std::size_t i = 0; i < in.size(); ++i) {
    const char c = in[i];
    const bool pad_ok = c == '=' && i + 2 >= in.size() &&
                        (i + 1 == in.size() || in[i + 1] == '=');
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '/' || pad_ok)) {
      throw DecodeError(DecodeErrorCode::kInvalidValue, "invalid base64 character");
    }
  }
  Bytes out(in.size() / 4 * 3);
  const int n = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(in.data()),
                                static_cast<int>(in.size()));
  if (n < 0) throw DecodeError(DecodeErrorCode::kInvalidValue, "invalid base64");
  std::size_t pad = 0;
  if (!in.empty() && in.back() == '=') ++pad;
  if (in.size() > 1 && in[in.size() - 2] == '=') ++pad;
  out.resize(static_cast<std::size_t>(n) - pad);
  return out;
}

// Finds "-----<word> RFAB-<LABEL>-----" starting at or after `from` and
// returns the label; `end` receives the offset just past the line marker.
std::string find_marker(std::string_view text, std::string_view word, std::size_t from,
                        std::size_t* start, std::size_t* end) {
  const std::string head = std::string(kDashes) + std::string(word) + " RFAB-";
  const std::size_t at = text.find(head, from);
  if (at == std::string_view::npos) {
    throw DecodeError(DecodeErrorCode::kBadMagic,
                      "missing " + std::string(word) + " armor line");
  }
  const std::size_t label_at = at + head.size();
  const std::size_t close = text.find(kDashes, label_at);
  if (close == std::string_view::npos) {
    throw DecodeError(DecodeErrorCode::kBadMagic, "unterminated armor line");
  }
  *start = at;
  *end = close + kDashes.size();
  return std::string(text.substr(label_at, close - label_at));
}

}  // namespace

std::string armor(std::span<const std::uint8_t> envelope) {
  const std::string label(kind_label(peek_kind(envelope)));
  const std::string body = base64(envelope);
  std::string out = std::string(kDashes) + "BEGIN RFAB-" + label + std::string(kDashes) + "\n";
  for (std::size_t i = 0; i < body.size(); i += kLineWidth) {
    out += body.substr(i, kLineWidth);
    out += '\n';
  }
  out += std::string(kDashes) + "END RFAB-" + label + std::string(kDashes) + "\n";
  return out;
}

Bytes dearmor(std::string_view text) {
  std::size_t begin_start = 0, begin_end = 0, end_start = 0, end_end = 0;
  const std::string label = find_marker(text, "BEGIN", 0, &begin_start, &begin_end);
  const std::string end_label = find_marker(text, "END", begin_end, &end_start, &end_end);
  if (label != end_label) {
    throw DecodeError(DecodeErrorCode::kBadKind, "armor BEGIN and END labels differ");
  }
  auto only_space = [](std::string_view s) {
    for (char c : s) {
      if (!std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
  };
  if (!only_space(text.substr(0, begin_start)) || !only_space(text.substr(end_end))) {
    throw DecodeError(DecodeErrorCode::kLengthMismatch, "text outside armor");
  }
  std::string body;
  for (char c : text.substr(begin_end, end_start - begin_end)) {
    if (!std::isspace(static_cast<unsigned char>(c))) body.push_back(c);
  }
  Bytes bytes = unbase64(body);
  if (kind_label(peek_kind(bytes)) != label) {
    throw DecodeError(DecodeErrorCode::kBadKind, "armor label does not match envelope kind");
  }
  return bytes;
}

}  // namespace rfabe
