#include "caseledger/sealer.hpp"

#include "caseledger/bytes.hpp"
#include "caseledger/error.hpp"

namespace caseledger {

namespace {

class ByteReader {
 public:
  explicit ByteReader(ByteView data) : data_(data) {}

  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | data_[pos_++];
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | data_[pos_++];
    return v;
  }
  Digest digest() {
    need(Digest::kSize);
    Digest d;
    std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(pos_), Digest::kSize, d.bytes.begin());
    pos_ += Digest::kSize;
    return d;
  }
  std::string prefixed() {
    auto n = u32();
    need(n);
    std::string s(data_.begin() + static_cast<std::ptrdiff_t>(pos_),
                  data_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == data_.size(); }

 private:
  void need(std::size_t n) const {
    if (data_.size() - pos_ < n) throw Error(Errc::InvalidEncoding, "truncated receipt");
  }
  ByteView data_;
  std::size_t pos_ = 0;
};

}  // namespace

Bytes ReceiptContents::encode() const {
  ByteWriter w;
  w.i64(time_ms).digest(subject).prefixed(case_id.str()).prefixed(detail);
  return std::move(w).take();
}

ReceiptContents ReceiptContents::decode(ByteView bytes) {
  ByteReader r(bytes);
  ReceiptContents c;
  c.time_ms = static_cast<std::int64_t>(r.u64());
  c.subject = r.digest();
  c.case_id = CaseId(r.prefixed());
  c.detail = r.prefixed();
  if (!r.done()) throw Error(Errc::InvalidEncoding, "trailing bytes in receipt");
  return c;
}

SealedPayload BoxSealer::seal(const PublicKey& recipient, ByteView plaintext) const {
  ensure_crypto_ready();
  if (recipient.bytes().size() != crypto_box_PUBLICKEYBYTES)
    throw Error(Errc::InvalidEncoding, "recipient key is not an X25519 public key");
  SealedPayload out{recipient.fingerprint(), Bytes(plaintext.size() + crypto_box_SEALBYTES)};
  crypto_box_seal(out.ciphertext.data(), plaintext.data(), plaintext.size(), recipient.bytes().data());
  return out;
}

Bytes BoxSealer::open(const SealedPayload& sealed, const KeyPair& keys) const {
  ensure_crypto_ready();
  if (sealed.ciphertext.size() < crypto_box_SEALBYTES || keys.secret_key.size() != crypto_box_SECRETKEYBYTES)
    throw Error(Errc::InvalidEncoding, "malformed sealed payload");
  Bytes plain(sealed.ciphertext.size() - crypto_box_SEALBYTES);
  if (crypto_box_seal_open(plain.data(), sealed.ciphertext.data(), sealed.ciphertext.size(),
                           keys.public_key.bytes().data(), keys.secret_key.data()) != 0)
    throw Error(Errc::InvalidEncoding, "sealed payload does not open with this key");
  return plain;
}

SealedPayload IdentitySealer::seal(const PublicKey& recipient, ByteView plaintext) const {
  return {recipient.fingerprint(), Bytes(plaintext.begin(), plaintext.end())};
}

Bytes IdentitySealer::open(const SealedPayload& sealed, const KeyPair& keys) const {
  if (sealed.recipient != keys.public_key.fingerprint())
    throw Error(Errc::InvalidEncoding, "payload addressed to a different key");
  return sealed.ciphertext;
}

}  // namespace caseledger
