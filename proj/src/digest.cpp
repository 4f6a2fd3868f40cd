#include "caseledger/digest.hpp"

#include <mutex>

#include "caseledger/error.hpp"

namespace caseledger {

namespace {

constexpr char kHexDigits[] = "0123456789abcdef";

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

}  // namespace

void ensure_crypto_ready() {
  static std::once_flag once;
  std::call_once(once, [] {
    if (sodium_init() < 0) throw std::runtime_error("libsodium initialisation failed");
  });
}

std::string to_hex(ByteView data) {
  std::string out;
  out.reserve(data.size() * 2);
  for (auto b : data) {
    out.push_back(kHexDigits[b >> 4]);
    out.push_back(kHexDigits[b & 0x0f]);
  }
  return out;
}

Bytes from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw Error(Errc::InvalidEncoding, "odd-length hex string");
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    int hi = hex_value(hex[2 * i]);
    int lo = hex_value(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw Error(Errc::InvalidEncoding, "non-lowercase-hex character");
    out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return out;
}

Digest Digest::from_hex(std::string_view hex) {
  if (hex.size() != kSize * 2) throw Error(Errc::InvalidEncoding, "digest must be 64 hex characters");
  Digest d;
  auto raw = caseledger::from_hex(hex);
  std::copy(raw.begin(), raw.end(), d.bytes.begin());
  return d;
}

bool Digest::is_zero() const noexcept {
  for (auto b : bytes)
    if (b != 0) return false;
  return true;
}

std::string Digest::hex() const { return to_hex(view()); }

Hasher::Hasher() {
  ensure_crypto_ready();
  crypto_hash_sha256_init(&state_);
}

Hasher::Hasher(std::uint8_t domain_tag) : Hasher() { update_byte(domain_tag); }

Hasher& Hasher::update(ByteView data) {
  crypto_hash_sha256_update(&state_, data.data(), data.size());
  return *this;
}

Hasher& Hasher::update_byte(std::uint8_t b) { return update(ByteView(&b, 1)); }

Hasher& Hasher::update_u32(std::uint32_t v) {
  std::uint8_t buf[4];
  for (int i = 0; i < 4; ++i) buf[i] = static_cast<std::uint8_t>(v >> (24 - 8 * i));
  return update(ByteView(buf, 4));
}

Hasher& Hasher::update_u64(std::uint64_t v) {
  std::uint8_t buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<std::uint8_t>(v >> (56 - 8 * i));
  return update(ByteView(buf, 8));
}

Hasher& Hasher::update_prefixed(ByteView data) {
  update_u32(static_cast<std::uint32_t>(data.size()));
  return update(data);
}

Hasher& Hasher::update_prefixed(std::string_view s) {
  return update_prefixed(ByteView(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
}

Digest Hasher::finish() {
  Digest d;
  crypto_hash_sha256_final(&state_, d.bytes.data());
  return d;
}

Digest digest(ByteView data) {
  ensure_crypto_ready();
  Digest d;
  crypto_hash_sha256(d.bytes.data(), data.data(), data.size());
  return d;
}

}  // namespace caseledger
