#pragma once

#include <cstdint>
#include <string>

#include "caseledger/types.hpp"

namespace caseledger {

/// Plaintext of a receipt: (time, hashed data or token, case) plus a free-form
/// detail string used by access-request receipts.
struct ReceiptContents {
  std::int64_t time_ms = 0;
  Digest subject;
  CaseId case_id{"-"};
  std::string detail;

  Bytes encode() const;
  static ReceiptContents decode(ByteView bytes);

  bool operator==(const ReceiptContents&) const = default;
};

struct SealedPayload {
  Digest recipient;  // fingerprint of the recipient key
  Bytes ciphertext;
};

/// Encrypts receipts to a user's public key.
class Sealer {
 public:
  virtual ~Sealer() = default;
  virtual SealedPayload seal(const PublicKey& recipient, ByteView plaintext) const = 0;
  /// Throws Error(InvalidEncoding) if the payload cannot be opened with `keys`.
  virtual Bytes open(const SealedPayload& sealed, const KeyPair& keys) const = 0;
};

/// libsodium sealed boxes (X25519 + XSalsa20-Poly1305, anonymous sender).
class BoxSealer final : public Sealer {
 public:
  SealedPayload seal(const PublicKey& recipient, ByteView plaintext) const override;
  Bytes open(const SealedPayload& sealed, const KeyPair& keys) const override;
};

/// Test sealer: ciphertext is the plaintext.
class IdentitySealer final : public Sealer {
 public:
  SealedPayload seal(const PublicKey& recipient, ByteView plaintext) const override;
  Bytes open(const SealedPayload& sealed, const KeyPair& keys) const override;
};

}  // namespace caseledger
