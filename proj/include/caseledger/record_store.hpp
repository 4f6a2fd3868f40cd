#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

#include "caseledger/ledger.hpp"
#include "caseledger/types.hpp"

namespace caseledger {

enum class Verdict : std::uint8_t { Verified, Compromised };

std::string_view to_string(Verdict v) noexcept;

struct VerificationReport {
  CaseId case_id{"-"};
  Digest recomputed_root;
  /// The trusted root the store was checked against (from the chain).
  Digest stored_root;
  Verdict verdict = Verdict::Compromised;
  std::optional<std::uint64_t> first_divergent_block;
  /// Set when a stored line could not be decoded in canonical form.
  std::optional<std::size_t> corrupt_line;
};

struct CaseRecords {
  std::vector<ProvenanceRecord> records;
  VerificationReport report;
};

/// Off-chain, case-indexed record store. Each case is an ordered list of
/// canonical JSON lines, ascending by block. The store is untrusted: reads
/// are checked against the chain's per-case root.
class RecordStore final : public RecordSink {
 public:
  RecordStore() = default;
  RecordStore(const RecordStore&) = delete;
  RecordStore& operator=(const RecordStore&) = delete;

  /// Throws Error(OutOfOrderBlock) unless block_number is greater than the
  /// case's last stored block.
  void append_block_records(const CaseId& case_id, std::uint64_t block_number,
                            std::span<const ProvenanceRecord> records, const Digest& case_root) override;

  bool has_case(const CaseId& case_id) const;
  std::vector<CaseId> cases() const;
  std::optional<Digest> stored_root(const CaseId& case_id) const;
  std::optional<std::uint64_t> last_block(const CaseId& case_id) const;

  /// Throws Error(UnknownCase), or Error(InvalidEncoding) for a corrupt line.
  std::vector<ProvenanceRecord> fetch_case_records(const CaseId& case_id) const;

  /// Recomputes the case root from the stored records, block by block, and
  /// compares it with `chain_root`. On mismatch, `history` (the chain's
  /// per-block roots for the case) is used to binary-search the first block
  /// whose stored prefix no longer reproduces the chain. Throws
  /// Error(UnknownCase).
  VerificationReport verify_case_records(const CaseId& case_id, const Digest& chain_root,
                                         std::span<const CaseRootEntry> history = {}) const;

  /// fetch and verify over a single decode pass. Records decoded before a
  /// corrupt line are still returned.
  CaseRecords fetch_verified(const CaseId& case_id, const Digest& chain_root,
                             std::span<const CaseRootEntry> history = {}) const;

  /// Raw stored lines; the mutable form exists for storage tooling and
  /// tamper tests.
  std::vector<std::string> case_lines(const CaseId& case_id) const;
  void replace_case_lines(const CaseId& case_id, std::vector<std::string> lines);

  /// <dir>/<case>.jsonl plus <dir>/index.json {case: {file, last_block, stored_root}}.
  void save(const std::filesystem::path& dir) const;
  static std::unique_ptr<RecordStore> load(const std::filesystem::path& dir);
  /// File name used for a case (unsafe characters percent-encoded).
  static std::string case_file_name(const CaseId& case_id);

  /// Same cases, lines, and index entries.
  bool same_contents(const RecordStore& other) const;

 private:
  struct CaseFile {
    std::vector<std::string> lines;
    std::uint64_t last_block = 0;
    Digest stored_root;
    bool operator==(const CaseFile&) const = default;
  };

  const CaseFile& file_locked(const CaseId& case_id) const;

  mutable std::shared_mutex mutex_;
  std::map<CaseId, CaseFile> cases_;
};

}  // namespace caseledger
