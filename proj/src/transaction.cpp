#include <array>

#include "caseledger/error.hpp"
#include "caseledger/serialize.hpp"
#include "caseledger/types.hpp"

namespace caseledger {

CaseId::CaseId(std::string value) : value_(std::move(value)) {
  if (value_.empty()) throw Error(Errc::MissingField, "case id must be non-empty");
}

PublicKey::PublicKey(Bytes bytes) : bytes_(std::move(bytes)), fingerprint_(digest(ByteView(bytes_))) {}

KeyPair KeyPair::generate() {
  ensure_crypto_ready();
  Bytes pk(crypto_box_PUBLICKEYBYTES);
  Bytes sk(crypto_box_SECRETKEYBYTES);
  crypto_box_keypair(pk.data(), sk.data());
  return {PublicKey(std::move(pk)), std::move(sk)};
}

KeyPair KeyPair::from_seed(ByteView seed) {
  ensure_crypto_ready();
  if (seed.size() != crypto_box_SEEDBYTES) throw Error(Errc::InvalidEncoding, "key seed must be 32 bytes");
  Bytes pk(crypto_box_PUBLICKEYBYTES);
  Bytes sk(crypto_box_SECRETKEYBYTES);
  crypto_box_seed_keypair(pk.data(), sk.data(), seed.data());
  return {PublicKey(std::move(pk)), std::move(sk)};
}

namespace {

constexpr std::array<std::string_view, 7> kKindNames{"Setup",  "InitialUpload", "FileUpload", "Analysis",
                                                     "AccReq", "Stage",         "Provenance"};

constexpr std::array<std::string_view, 11> kRecordKindNames{
    "CaseNumber",      "Timestamp",      "InitialBlockNumber", "CurrentStage",
    "TokenList",       "AccessRequest",  "ClientInfo",         "TokenDependency",
    "AccessValidity",  "StageChange",    "TypeOfDataUpload"};

}  // namespace

std::string_view to_string(TransactionKind k) noexcept { return kKindNames[static_cast<std::size_t>(k)]; }

std::optional<TransactionKind> parse_transaction_kind(std::string_view s) noexcept {
  for (std::size_t i = 0; i < kKindNames.size(); ++i)
    if (kKindNames[i] == s) return static_cast<TransactionKind>(i);
  return std::nullopt;
}

std::string_view to_string(RecordKind k) noexcept { return kRecordKindNames[static_cast<std::size_t>(k)]; }

std::optional<RecordKind> parse_record_kind(std::string_view s) noexcept {
  for (std::size_t i = 0; i < kRecordKindNames.size(); ++i)
    if (kRecordKindNames[i] == s) return static_cast<RecordKind>(i);
  return std::nullopt;
}

Transaction finalize(Transaction tx) {
  tx.id = transaction_id(tx);
  return tx;
}

}  // namespace caseledger
