#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <sodium.h>

namespace caseledger {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

/// Domain-separation prefixes. Every digest computed by the library starts
/// with exactly one of these bytes so that values from different contexts
/// can never be confused with each other.
namespace tag {
inline constexpr std::uint8_t kMerkleLeaf = 0x00;
inline constexpr std::uint8_t kMerkleNode = 0x01;
inline constexpr std::uint8_t kTransaction = 0x02;
inline constexpr std::uint8_t kToken = 0x03;
inline constexpr std::uint8_t kCaseRoot = 0x04;
inline constexpr std::uint8_t kRecordCommit = 0x05;
inline constexpr std::uint8_t kBlockHeader = 0x06;
}  // namespace tag

/// 32-byte SHA-256 value.
struct Digest {
  static constexpr std::size_t kSize = 32;
  std::array<std::uint8_t, kSize> bytes{};

  static Digest zero() { return {}; }
  /// Strict: exactly 64 lowercase hex characters.
  static Digest from_hex(std::string_view hex);

  bool is_zero() const noexcept;
  std::string hex() const;
  ByteView view() const noexcept { return {bytes.data(), bytes.size()}; }

  auto operator<=>(const Digest&) const = default;
};

std::string to_hex(ByteView data);
/// Lowercase only; throws Error(InvalidEncoding) on anything else.
Bytes from_hex(std::string_view hex);

/// Must run before any libsodium call; idempotent and thread-safe.
void ensure_crypto_ready();

/// Incremental SHA-256 with helpers for the canonical field encodings.
class Hasher {
 public:
  Hasher();
  explicit Hasher(std::uint8_t domain_tag);

  Hasher& update(ByteView data);
  Hasher& update_byte(std::uint8_t b);
  Hasher& update(const Digest& d) { return update(d.view()); }
  Hasher& update_u32(std::uint32_t v);
  Hasher& update_u64(std::uint64_t v);
  /// u32 big-endian length followed by the bytes.
  Hasher& update_prefixed(ByteView data);
  Hasher& update_prefixed(std::string_view s);

  Digest finish();

 private:
  crypto_hash_sha256_state state_;
};

Digest digest(ByteView data);
inline Digest digest(std::string_view s) {
  return digest(ByteView(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
}

}  // namespace caseledger

template <>
struct std::hash<caseledger::Digest> {
  std::size_t operator()(const caseledger::Digest& d) const noexcept {
    std::size_t h = 0;
    for (std::size_t i = 0; i < sizeof(std::size_t); ++i) h = (h << 8) | d.bytes[i];
    return h;
  }
};
