#pragma once

#include <atomic>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

#include "caseledger/contracts.hpp"
#include "caseledger/error.hpp"
#include "caseledger/types.hpp"

namespace caseledger {

using Clock = std::function<std::int64_t()>;

/// Wall clock in milliseconds since the epoch.
std::int64_t system_clock_ms();

struct SealingConfig {
  std::size_t transactions_per_block = 10;
  /// Benchmark toggle: compute and store per-case roots in block headers.
  bool with_case_roots = true;
};

struct SubmitTicket {
  Digest tx_id;
  std::uint64_t position = 0;
};

struct DroppedTransaction {
  Digest tx_id;
  Errc code;
  std::string reason;
};

struct SealOutcome {
  std::shared_ptr<const Block> block;
  std::vector<DroppedTransaction> dropped;
  std::vector<SealedPayload> receipts;
  std::size_t rejected = 0;
};

struct CaseRootEntry {
  std::uint64_t block = 0;
  Digest root;

  bool operator==(const CaseRootEntry&) const = default;
};

/// Receives each sealed block's case records together with the new case root.
class RecordSink {
 public:
  virtual ~RecordSink() = default;
  virtual void append_block_records(const CaseId& case_id, std::uint64_t block_number,
                                    std::span<const ProvenanceRecord> records, const Digest& case_root) = 0;
};

/// Leaves committed for one case in one block: the case's records are split
/// into runs of equal tx_id and each run becomes record_commitment(tx_id, run).
std::vector<Digest> case_leaves(std::span<const ProvenanceRecord* const> case_records);

/// Merkle root over case_leaves() for every case present in `records`.
std::map<CaseId, Digest> block_case_roots(std::span<const ProvenanceRecord> records);

/// Recomputes body_root, case_roots and the header link for a block.
Block assemble_block(std::uint64_t index, const Digest& prev_hash, std::int64_t timestamp_ms,
                     std::vector<Transaction> transactions, std::vector<ProvenanceRecord> records,
                     const std::map<CaseId, Digest>& latest_case_roots, bool with_case_roots);

struct ChainValidation {
  bool ok = true;
  std::optional<std::uint64_t> first_invalid_block;
  std::string reason;
};

/// Full structural check: header index and prev_hash links, every
/// transaction id, body_root, record placement, and case-root chaining.
ChainValidation validate_chain(std::span<const Block> blocks);
ChainValidation validate_chain(std::span<const std::shared_ptr<const Block>> blocks);

/// Single ordering authority. One thread seals; any number of threads may
/// read sealed blocks, roots and contract snapshots concurrently.
class Ledger {
 public:
  explicit Ledger(ContractState genesis_state, SealingConfig config = {}, Clock clock = system_clock_ms);

  Ledger(const Ledger&) = delete;
  Ledger& operator=(const Ledger&) = delete;

  void set_sealer(const Sealer* sealer) { sealer_ = sealer; }
  void set_record_sink(RecordSink* sink) { sink_ = sink; }
  const SealingConfig& config() const noexcept { return config_; }

  /// Throws Error(MalformedTransaction) on incomplete transactions or a
  /// stale id.
  SubmitTicket submit_transaction(Transaction tx);
  std::size_t mempool_size() const;
  std::vector<Transaction> pending() const;

  /// Takes up to transactions_per_block pending transactions in FIFO order.
  /// Transactions failing a contract precondition are dropped (reported,
  /// not included). Throws Error(EmptyMempool).
  SealOutcome seal_block();
  /// Seals every pending transaction, block by block.
  std::vector<SealOutcome> seal_all();
  /// Seals block 0 from all pending transactions, possibly none. Only valid
  /// on an empty chain.
  SealOutcome seal_genesis();

  std::uint64_t height() const;
  /// Reads a block body; counted in body_reads().
  std::shared_ptr<const Block> block(std::uint64_t index) const;
  BlockHeader header(std::uint64_t index) const;
  std::vector<std::shared_ptr<const Block>> blocks() const;
  std::uint64_t body_reads() const noexcept { return body_reads_.load(std::memory_order_relaxed); }

  /// Latest M_case and the block that set it. Throws Error(UnknownCase).
  std::pair<Digest, std::uint64_t> latest_case_root(const CaseId& case_id) const;
  /// Every (block, M_case) for the case, ascending. Empty if unknown.
  std::vector<CaseRootEntry> case_root_history(const CaseId& case_id) const;
  std::vector<CaseId> known_cases() const;

  /// Throws Error(UnknownCase).
  CaseContract case_state(const CaseId& case_id) const;
  ContractState state_snapshot() const;

  /// Rebuilds a ledger by re-executing `blocks` from `genesis_state`. Every
  /// block must reproduce exactly (records and header), otherwise
  /// Error(ReplayMismatch). A non-null `sink` receives the records of every
  /// replayed block and stays attached to the returned ledger.
  static std::unique_ptr<Ledger> replay(ContractState genesis_state, SealingConfig config,
                                        std::span<const Block> blocks, Clock clock = system_clock_ms,
                                        RecordSink* sink = nullptr);

 private:
  SealOutcome seal_locked(std::size_t max_transactions);
  void commit_locked(std::shared_ptr<const Block> block);

  SealingConfig config_;
  Clock clock_;
  const Sealer* sealer_ = nullptr;
  RecordSink* sink_ = nullptr;

  mutable std::mutex mempool_mutex_;
  std::deque<Transaction> mempool_;
  std::uint64_t submitted_ = 0;

  mutable std::shared_mutex chain_mutex_;
  ContractState state_;
  std::vector<std::shared_ptr<const Block>> blocks_;
  std::map<CaseId, Digest> latest_roots_;
  std::map<CaseId, std::vector<CaseRootEntry>> root_history_;
  mutable std::atomic<std::uint64_t> body_reads_{0};
};

/// blocks/<index>.json, one JSON document per block.
void write_block_file(const std::filesystem::path& blocks_dir, const Block& block);
/// Reads blocks/0.json, 1.json, ... until the first gap.
std::vector<Block> read_block_files(const std::filesystem::path& blocks_dir);

}  // namespace caseledger
