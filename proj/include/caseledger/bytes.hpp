#pragma once

#include <cstdint>
#include <string_view>

#include "caseledger/digest.hpp"

namespace caseledger {

/// Append-only builder for the canonical wire layout: big-endian fixed-width
/// integers and u32-length-prefixed variable fields.
class ByteWriter {
 public:
  ByteWriter& u8(std::uint8_t v) {
    buf_.push_back(v);
    return *this;
  }
  ByteWriter& u32(std::uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8) buf_.push_back(static_cast<std::uint8_t>(v >> shift));
    return *this;
  }
  ByteWriter& u64(std::uint64_t v) {
    for (int shift = 56; shift >= 0; shift -= 8) buf_.push_back(static_cast<std::uint8_t>(v >> shift));
    return *this;
  }
  ByteWriter& i64(std::int64_t v) { return u64(static_cast<std::uint64_t>(v)); }
  ByteWriter& raw(ByteView data) {
    buf_.insert(buf_.end(), data.begin(), data.end());
    return *this;
  }
  ByteWriter& digest(const Digest& d) { return raw(d.view()); }
  ByteWriter& prefixed(ByteView data) {
    u32(static_cast<std::uint32_t>(data.size()));
    return raw(data);
  }
  ByteWriter& prefixed(std::string_view s) {
    return prefixed(ByteView(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
  }

  const Bytes& bytes() const& { return buf_; }
  Bytes take() && { return std::move(buf_); }

 private:
  Bytes buf_;
};

}  // namespace caseledger
