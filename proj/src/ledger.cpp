#include "caseledger/ledger.hpp"

#include <chrono>
#include <fstream>
#include <set>

#include "caseledger/json_codec.hpp"
#include "caseledger/merkle.hpp"
#include "caseledger/serialize.hpp"

namespace caseledger {

std::int64_t system_clock_ms() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

std::vector<Digest> case_leaves(std::span<const ProvenanceRecord* const> case_records) {
  std::vector<Digest> leaves;
  std::size_t start = 0;
  while (start < case_records.size()) {
    std::size_t end = start + 1;
    while (end < case_records.size() && case_records[end]->tx_id == case_records[start]->tx_id) ++end;
    leaves.push_back(record_commitment(case_records[start]->tx_id, case_records.subspan(start, end - start)));
    start = end;
  }
  return leaves;
}

std::map<CaseId, Digest> block_case_roots(std::span<const ProvenanceRecord> records) {
  std::map<CaseId, std::vector<const ProvenanceRecord*>> by_case;
  for (const auto& r : records)
    if (r.case_id) by_case[*r.case_id].push_back(&r);
  std::map<CaseId, Digest> roots;
  for (const auto& [case_id, recs] : by_case) {
    auto leaves = case_leaves(recs);
    roots.emplace(case_id, merkle_root(leaves));
  }
  return roots;
}

Block assemble_block(std::uint64_t index, const Digest& prev_hash, std::int64_t timestamp_ms,
                     std::vector<Transaction> transactions, std::vector<ProvenanceRecord> records,
                     const std::map<CaseId, Digest>& latest_case_roots, bool with_case_roots) {
  Block block;
  block.header.index = index;
  block.header.prev_hash = prev_hash;
  block.header.timestamp_ms = timestamp_ms;
  if (!transactions.empty()) {
    std::vector<Digest> ids;
    ids.reserve(transactions.size());
    for (const auto& tx : transactions) ids.push_back(tx.id);
    block.header.body_root = merkle_root(ids);
  }
  if (with_case_roots) {
    std::map<CaseId, Digest> roots;
    for (auto& [case_id, block_root] : block_case_roots(records)) {
      auto it = latest_case_roots.find(case_id);
      const Digest prev = it == latest_case_roots.end() ? Digest::zero() : it->second;
      roots.emplace(case_id, chain_case_root(prev, block_root));
    }
    block.header.case_roots = std::move(roots);
  }
  block.transactions = std::move(transactions);
  block.records = std::move(records);
  return block;
}

namespace {

template <typename Get>
ChainValidation validate_impl(std::size_t count, Get&& get) {
  std::map<CaseId, Digest> roots;
  Digest prev;
  auto fail = [](std::uint64_t i, std::string why) { return ChainValidation{false, i, std::move(why)}; };

  for (std::size_t i = 0; i < count; ++i) {
    const Block& b = get(i);
    const auto& h = b.header;
    if (h.index != i) return fail(i, "header index out of sequence");
    if (h.prev_hash != prev) return fail(i, "prev_hash does not link to the previous header");

    std::set<Digest> ids;
    std::vector<Digest> id_list;
    for (const auto& tx : b.transactions) {
      Digest recomputed;
      try {
        recomputed = transaction_id(tx);
      } catch (const Error&) {
        return fail(i, "transaction fails canonical serialisation");
      }
      if (recomputed != tx.id) return fail(i, "transaction id does not match its contents");
      ids.insert(tx.id);
      id_list.push_back(tx.id);
    }
    Digest body = id_list.empty() ? Digest::zero() : merkle_root(id_list);
    if (body != h.body_root) return fail(i, "body_root mismatch");

    for (const auto& r : b.records) {
      if (r.block_number != i) return fail(i, "record carries a foreign block number");
      if (!ids.contains(r.tx_id)) return fail(i, "record references a transaction outside the block");
    }

    if (h.case_roots) {
      auto expected = assemble_block(i, prev, h.timestamp_ms, {}, b.records, roots, true).header.case_roots;
      if (*expected != *h.case_roots) return fail(i, "case_roots mismatch");
      for (const auto& [c, root] : *h.case_roots) roots[c] = root;
    }
    prev = header_digest(h);
  }
  return {};
}

}  // namespace

ChainValidation validate_chain(std::span<const Block> blocks) {
  return validate_impl(blocks.size(), [&](std::size_t i) -> const Block& { return blocks[i]; });
}

ChainValidation validate_chain(std::span<const std::shared_ptr<const Block>> blocks) {
  return validate_impl(blocks.size(), [&](std::size_t i) -> const Block& { return *blocks[i]; });
}

Ledger::Ledger(ContractState genesis_state, SealingConfig config, Clock clock)
    : config_(config), clock_(std::move(clock)), state_(std::move(genesis_state)) {
  if (config_.transactions_per_block == 0) throw Error(Errc::InfeasibleSpec, "transactions_per_block must be >= 1");
}

SubmitTicket Ledger::submit_transaction(Transaction tx) {
  Digest expected;
  try {
    expected = transaction_id(tx);
  } catch (const Error& e) {
    throw Error(Errc::MalformedTransaction, e.what());
  }
  if (expected != tx.id) throw Error(Errc::MalformedTransaction, "transaction id does not match its contents");

  std::lock_guard lock(mempool_mutex_);
  mempool_.push_back(std::move(tx));
  return {expected, submitted_++};
}

std::size_t Ledger::mempool_size() const {
  std::lock_guard lock(mempool_mutex_);
  return mempool_.size();
}

std::vector<Transaction> Ledger::pending() const {
  std::lock_guard lock(mempool_mutex_);
  return {mempool_.begin(), mempool_.end()};
}

SealOutcome Ledger::seal_block() {
  if (mempool_size() == 0) throw Error(Errc::EmptyMempool, "nothing to seal");
  std::unique_lock lock(chain_mutex_);
  return seal_locked(config_.transactions_per_block);
}

std::vector<SealOutcome> Ledger::seal_all() {
  std::vector<SealOutcome> out;
  while (mempool_size() > 0) out.push_back(seal_block());
  return out;
}

SealOutcome Ledger::seal_genesis() {
  std::unique_lock lock(chain_mutex_);
  if (!blocks_.empty()) throw Error(Errc::ReplayMismatch, "genesis already sealed");
  return seal_locked(0);
}

SealOutcome Ledger::seal_locked(std::size_t max_transactions) {
  const std::uint64_t index = blocks_.size();
  const ApplyContext ctx{sealer_, &latest_roots_};

  SealOutcome outcome;
  std::vector<Transaction> included;
  std::vector<ProvenanceRecord> records;

  while (max_transactions == 0 || included.size() < max_transactions) {
    Transaction tx;
    {
      std::lock_guard lock(mempool_mutex_);
      if (mempool_.empty()) break;
      tx = std::move(mempool_.front());
      mempool_.pop_front();
    }
    try {
      Effects effects = apply_transaction(state_, tx, index, ctx);
      if (effects.status == ApplyStatus::Rejected) ++outcome.rejected;
      std::move(effects.records.begin(), effects.records.end(), std::back_inserter(records));
      std::move(effects.receipts.begin(), effects.receipts.end(), std::back_inserter(outcome.receipts));
      included.push_back(std::move(tx));
    } catch (const Error& e) {
      outcome.dropped.push_back({tx.id, e.code(), e.what()});
    }
  }

  std::int64_t ts = clock_();
  Digest prev;
  if (!blocks_.empty()) {
    ts = std::max(ts, blocks_.back()->header.timestamp_ms);
    prev = header_digest(blocks_.back()->header);
  }
  auto block = std::make_shared<const Block>(assemble_block(index, prev, ts, std::move(included), std::move(records),
                                                            latest_roots_, config_.with_case_roots));
  commit_locked(block);
  outcome.block = std::move(block);
  return outcome;
}

void Ledger::commit_locked(std::shared_ptr<const Block> block) {
  const auto& h = block->header;
  if (h.case_roots) {
    for (const auto& [case_id, root] : *h.case_roots) {
      latest_roots_[case_id] = root;
      root_history_[case_id].push_back({h.index, root});
    }
  }
  blocks_.push_back(block);

  if (sink_ != nullptr) {
    std::map<CaseId, std::vector<ProvenanceRecord>> by_case;
    for (const auto& r : block->records)
      if (r.case_id) by_case[*r.case_id].push_back(r);
    for (const auto& [case_id, recs] : by_case) {
      Digest root;
      if (h.case_roots) root = h.case_roots->at(case_id);
      sink_->append_block_records(case_id, h.index, recs, root);
    }
  }
}

std::uint64_t Ledger::height() const {
  std::shared_lock lock(chain_mutex_);
  return blocks_.size();
}

std::shared_ptr<const Block> Ledger::block(std::uint64_t index) const {
  std::shared_lock lock(chain_mutex_);
  if (index >= blocks_.size()) throw Error(Errc::Io, "block index out of range");
  body_reads_.fetch_add(1, std::memory_order_relaxed);
  return blocks_[index];
}

BlockHeader Ledger::header(std::uint64_t index) const {
  std::shared_lock lock(chain_mutex_);
  if (index >= blocks_.size()) throw Error(Errc::Io, "block index out of range");
  return blocks_[index]->header;
}

std::vector<std::shared_ptr<const Block>> Ledger::blocks() const {
  std::shared_lock lock(chain_mutex_);
  return blocks_;
}

std::pair<Digest, std::uint64_t> Ledger::latest_case_root(const CaseId& case_id) const {
  std::shared_lock lock(chain_mutex_);
  auto it = root_history_.find(case_id);
  if (it == root_history_.end() || it->second.empty()) throw Error(Errc::UnknownCase, case_id.str());
  return {it->second.back().root, it->second.back().block};
}

std::vector<CaseRootEntry> Ledger::case_root_history(const CaseId& case_id) const {
  std::shared_lock lock(chain_mutex_);
  auto it = root_history_.find(case_id);
  if (it == root_history_.end()) return {};
  return it->second;
}

std::vector<CaseId> Ledger::known_cases() const {
  std::shared_lock lock(chain_mutex_);
  std::vector<CaseId> out;
  for (const auto& [c, _] : state_.cases) out.push_back(c);
  return out;
}

CaseContract Ledger::case_state(const CaseId& case_id) const {
  std::shared_lock lock(chain_mutex_);
  return caseledger::case_state(state_, case_id);
}

ContractState Ledger::state_snapshot() const {
  std::shared_lock lock(chain_mutex_);
  return state_;
}

std::unique_ptr<Ledger> Ledger::replay(ContractState genesis_state, SealingConfig config,
                                       std::span<const Block> blocks, Clock clock, RecordSink* sink) {
  auto ledger = std::make_unique<Ledger>(std::move(genesis_state), config, std::move(clock));
  ledger->sink_ = sink;
  std::unique_lock lock(ledger->chain_mutex_);
  for (const auto& stored : blocks) {
    const std::uint64_t index = ledger->blocks_.size();
    auto mismatch = [&](const std::string& why) {
      return Error(Errc::ReplayMismatch, "block " + std::to_string(index) + ": " + why);
    };
    if (stored.header.index != index) throw mismatch("index out of sequence");

    const ApplyContext ctx{nullptr, &ledger->latest_roots_};
    std::vector<ProvenanceRecord> records;
    for (const auto& tx : stored.transactions) {
      try {
        Effects effects = apply_transaction(ledger->state_, tx, index, ctx);
        std::move(effects.records.begin(), effects.records.end(), std::back_inserter(records));
      } catch (const Error& e) {
        throw mismatch(std::string("transaction no longer applies: ") + e.what());
      }
    }
    if (records != stored.records) throw mismatch("re-executed records differ from the stored block");

    Digest prev = index == 0 ? Digest::zero() : header_digest(ledger->blocks_.back()->header);
    auto rebuilt = std::make_shared<const Block>(
        assemble_block(index, prev, stored.header.timestamp_ms, stored.transactions, std::move(records),
                       ledger->latest_roots_, stored.header.case_roots.has_value()));
    if (rebuilt->header != stored.header) throw mismatch("recomputed header differs from the stored header");
    ledger->commit_locked(std::move(rebuilt));
  }
  return ledger;
}

void write_block_file(const std::filesystem::path& blocks_dir, const Block& block) {
  std::filesystem::create_directories(blocks_dir);
  auto path = blocks_dir / (std::to_string(block.header.index) + ".json");
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(Errc::Io, "cannot write " + path.string());
  out << block_to_json(block).dump(2) << '\n';
}

std::vector<Block> read_block_files(const std::filesystem::path& blocks_dir) {
  std::vector<Block> blocks;
  for (std::uint64_t i = 0;; ++i) {
    auto path = blocks_dir / (std::to_string(i) + ".json");
    std::ifstream in(path);
    if (!in) break;
    try {
      blocks.push_back(block_from_json(nlohmann::json::parse(in)));
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::InvalidEncoding, path.string() + ": " + e.what());
    }
  }
  return blocks;
}

}  // namespace caseledger
