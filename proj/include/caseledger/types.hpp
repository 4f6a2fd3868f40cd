#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "caseledger/digest.hpp"
#include "caseledger/roles.hpp"

namespace caseledger {

/// Non-empty case identifier.
class CaseId {
 public:
  explicit CaseId(std::string value);

  const std::string& str() const noexcept { return value_; }
  auto operator<=>(const CaseId&) const = default;

 private:
  std::string value_;
};

/// Public-key material plus its fingerprint (digest of the key bytes).
class PublicKey {
 public:
  PublicKey() = default;
  explicit PublicKey(Bytes bytes);

  const Bytes& bytes() const noexcept { return bytes_; }
  const Digest& fingerprint() const noexcept { return fingerprint_; }
  std::string hex() const { return to_hex(bytes_); }

  bool operator==(const PublicKey& o) const { return bytes_ == o.bytes_; }

 private:
  Bytes bytes_;
  Digest fingerprint_;
};

/// X25519 key pair usable with the box sealer.
struct KeyPair {
  PublicKey public_key;
  Bytes secret_key;

  static KeyPair generate();
  /// Deterministic derivation from a 32-byte seed.
  static KeyPair from_seed(ByteView seed);
};

enum class TransactionKind : std::uint8_t {
  Setup,
  InitialUpload,
  FileUpload,
  Analysis,
  AccReq,
  Stage,
  Provenance,
};

std::string_view to_string(TransactionKind k) noexcept;
std::optional<TransactionKind> parse_transaction_kind(std::string_view s) noexcept;

struct SetupPayload {
  PublicKey subject;
  Role role = Role::Investigator;

  bool operator==(const SetupPayload&) const = default;
};

struct InitialUploadPayload {
  std::string file_id;
  Digest content;
  Stage stage = Stage::AffidavitWarrant;

  bool operator==(const InitialUploadPayload&) const = default;
};

struct FileUploadPayload {
  std::string file_id;
  Digest content;

  bool operator==(const FileUploadPayload&) const = default;
};

struct AnalysisPayload {
  std::vector<Digest> parents;

  bool operator==(const AnalysisPayload&) const = default;
};

struct AccessRequestPayload {
  std::string resource;

  bool operator==(const AccessRequestPayload&) const = default;
};

struct StagePayload {
  Stage target = Stage::AffidavitWarrant;

  bool operator==(const StagePayload&) const = default;
};

struct ProvenancePayload {
  bool operator==(const ProvenancePayload&) const = default;
};

/// Alternative index equals the TransactionKind value.
using Payload = std::variant<SetupPayload, InitialUploadPayload, FileUploadPayload, AnalysisPayload,
                             AccessRequestPayload, StagePayload, ProvenancePayload>;

struct Transaction {
  std::optional<CaseId> case_id;  // absent only for Setup
  PublicKey sender;
  std::int64_t timestamp_ms = 0;
  /// The sender's view of the case stage. Required for AccReq; when absent on
  /// other kinds the access check runs against the stored stage.
  std::optional<std::string> declared_stage;
  Payload payload;
  Digest id;

  TransactionKind kind() const noexcept { return static_cast<TransactionKind>(payload.index()); }
  bool operator==(const Transaction&) const = default;
};

/// Computes and stores tx.id; throws Error(MissingField) if incomplete.
Transaction finalize(Transaction tx);

enum class RecordKind : std::uint8_t {
  CaseNumber,
  Timestamp,
  InitialBlockNumber,
  CurrentStage,
  TokenList,
  AccessRequest,
  ClientInfo,
  TokenDependency,
  AccessValidity,
  StageChange,
  TypeOfDataUpload,
};

std::string_view to_string(RecordKind k) noexcept;
std::optional<RecordKind> parse_record_kind(std::string_view s) noexcept;

/// One audit fact. Records without a case (user registration, rejected case
/// creation) live on chain only.
struct ProvenanceRecord {
  RecordKind kind = RecordKind::CaseNumber;
  std::optional<CaseId> case_id;
  std::uint64_t block_number = 0;
  Digest tx_id;
  std::map<std::string, std::string> payload;

  bool operator==(const ProvenanceRecord&) const = default;
};

struct BlockHeader {
  std::uint64_t index = 0;
  Digest prev_hash;
  std::int64_t timestamp_ms = 0;
  Digest body_root;
  /// Absent when the chain is sealed without per-case roots.
  std::optional<std::map<CaseId, Digest>> case_roots;

  bool operator==(const BlockHeader&) const = default;
};

struct Block {
  BlockHeader header;
  std::vector<Transaction> transactions;
  std::vector<ProvenanceRecord> records;
};

}  // namespace caseledger
