#include <gtest/gtest.h>

#include <filesystem>
#include <thread>

#include "caseledger/bench.hpp"
#include "caseledger/json_codec.hpp"
#include "caseledger/ledger.hpp"
#include "support.hpp"

using namespace caseledger;
using namespace support;

namespace {

Clock counter(std::int64_t start = 1000) {
  auto t = std::make_shared<std::int64_t>(start);
  return [t] { return (*t)++; };
}

Fixture small_fixture(std::uint64_t seed, std::size_t blocks = 50, std::size_t cases = 8) {
  WorkloadSpec spec;
  spec.num_blocks = blocks;
  spec.num_cases = cases;
  spec.seed = seed;
  return build_fixture(spec);
}

// Straight-line recomputation of every header's case roots.
void expect_roots_match_oracle(const Ledger& ledger) {
  std::map<CaseId, Digest> latest;
  for (std::uint64_t i = 0; i < ledger.height(); ++i) {
    auto block = ledger.block(i);
    std::map<CaseId, std::vector<ProvenanceRecord>> by_case;
    for (const auto& r : block->records)
      if (r.case_id) by_case[*r.case_id].push_back(r);
    std::map<CaseId, Digest> expected;
    for (const auto& [c, records] : by_case) {
      auto it = latest.find(c);
      Digest prev = it == latest.end() ? Digest::zero() : it->second;
      expected[c] = latest[c] = oracle_chain(prev, oracle_block_case_root(records));
    }
    ASSERT_TRUE(block->header.case_roots.has_value());
    EXPECT_EQ(*block->header.case_roots, expected) << "block " << i;

    std::vector<Digest> ids;
    for (const auto& tx : block->transactions) ids.push_back(tx.id);
    EXPECT_EQ(block->header.body_root, ids.empty() ? Digest::zero() : oracle_root(ids));
  }
  for (const auto& [c, root] : latest) EXPECT_EQ(ledger.latest_case_root(c).first, root);
}

}  // namespace

TEST(Ledger, SubmitValidatesTransactions) {
  Cast cast;
  Ledger ledger(cast.genesis());
  auto tx = setup_tx(cast.admin, cast.examiner.public_key, Role::DigitalForensicsExaminer, 1);
  EXPECT_EQ(ledger.submit_transaction(tx).tx_id, tx.id);

  Transaction missing_case = file_upload(cast.examiner, "C1", "f", 1);
  missing_case.case_id.reset();
  try {
    ledger.submit_transaction(missing_case);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::MalformedTransaction);
  }
  Transaction stale = tx;
  stale.timestamp_ms = 99;
  EXPECT_THROW(ledger.submit_transaction(stale), Error);
}

TEST(Ledger, EmptyMempoolCannotSeal) {
  Cast cast;
  Ledger ledger(cast.genesis());
  try {
    ledger.seal_block();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::EmptyMempool);
  }
}

TEST(Ledger, ThousandTransactionsMakeHundredBlocks) {
  WorkloadSpec spec;
  spec.num_blocks = 100;
  spec.num_cases = 10;
  Workload w = generate_workload(spec);
  Ledger ledger(w.genesis_state(), {10, true}, counter());
  for (const auto& tx : w.setup) ledger.submit_transaction(tx);
  ledger.seal_genesis();
  for (const auto& tx : w.transactions) ledger.submit_transaction(tx);
  ASSERT_EQ(w.transactions.size(), 1000u);
  auto outcomes = ledger.seal_all();
  EXPECT_EQ(outcomes.size(), 100u);
  EXPECT_EQ(ledger.height(), 101u);

  // FIFO order is preserved in bodies.
  std::size_t k = 0;
  for (std::uint64_t i = 1; i < ledger.height(); ++i)
    for (const auto& tx : ledger.block(i)->transactions) EXPECT_EQ(tx.id, w.transactions[k++].id);
  EXPECT_EQ(k, w.transactions.size());
}

TEST(Ledger, CaseRootsMatchStraightLineOracle) {
  for (std::uint64_t seed : {1, 2, 3}) {
    Fixture f = small_fixture(seed);
    expect_roots_match_oracle(*f.ledger);
    EXPECT_TRUE(validate_chain(f.ledger->blocks()).ok);
  }
}

TEST(Ledger, CaseChainsSkipBlocksWithoutTheCase) {
  Cast cast;
  Ledger ledger(cast.genesis(), {1, true}, counter());
  for (const auto& tx : cast.setups()) ledger.submit_transaction(tx);
  ledger.seal_genesis();
  ledger.submit_transaction(initial_upload(cast.officer, "A", Stage::Investigation, "a", 10));  // block 1
  ledger.submit_transaction(initial_upload(cast.officer, "B", Stage::Investigation, "b", 11));  // block 2
  ledger.submit_transaction(file_upload(cast.examiner, "A", "x", 12));                         // block 3
  ledger.seal_all();

  auto [root1, at1] = std::pair{ledger.header(1).case_roots->at(CaseId("A")), 1};
  EXPECT_EQ(ledger.case_root_history(CaseId("A")).size(), 2u);
  auto [latest, block] = ledger.latest_case_root(CaseId("A"));
  EXPECT_EQ(block, 3u);
  std::vector<ProvenanceRecord> a3;
  for (const auto& r : ledger.block(3)->records)
    if (r.case_id == CaseId("A")) a3.push_back(r);
  EXPECT_EQ(latest, oracle_chain(root1, oracle_block_case_root(a3)));
  EXPECT_EQ(ledger.latest_case_root(CaseId("B")).second, 2u);
  EXPECT_FALSE(ledger.header(2).case_roots->contains(CaseId("A")));
  try {
    ledger.latest_case_root(CaseId("C"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::UnknownCase);
  }
}

TEST(Ledger, PreconditionFailuresAreDroppedNotSealed) {
  Cast cast;
  Ledger ledger(cast.genesis(), {10, true}, counter());
  for (const auto& tx : cast.setups()) ledger.submit_transaction(tx);
  ledger.seal_genesis();
  auto create = initial_upload(cast.officer, "A", Stage::Investigation, "a", 10);
  auto orphan = file_upload(cast.examiner, "missing", "x", 11);
  auto dup = initial_upload(cast.officer, "A", Stage::Analysis, "again", 12);
  ledger.submit_transaction(create);
  ledger.submit_transaction(orphan);
  ledger.submit_transaction(dup);
  auto out = ledger.seal_block();
  ASSERT_EQ(out.block->transactions.size(), 1u);
  ASSERT_EQ(out.dropped.size(), 2u);
  EXPECT_EQ(out.dropped[0].code, Errc::UnknownCase);
  EXPECT_EQ(out.dropped[1].code, Errc::CaseExists);
}

TEST(Ledger, WithoutCaseRootsOnlyHeadersDiffer) {
  WorkloadSpec spec;
  spec.num_blocks = 30;
  spec.num_cases = 6;
  Fixture a = build_fixture(spec, {true, nullptr, {}});
  Fixture b = build_fixture(spec, {false, nullptr, {}});
  ASSERT_EQ(a.ledger->height(), b.ledger->height());
  for (std::uint64_t i = 0; i < a.ledger->height(); ++i) {
    auto x = a.ledger->block(i);
    auto y = b.ledger->block(i);
    EXPECT_EQ(x->transactions, y->transactions);
    EXPECT_EQ(x->records, y->records);
    EXPECT_EQ(x->header.body_root, y->header.body_root);
    EXPECT_EQ(x->header.timestamp_ms, y->header.timestamp_ms);
    EXPECT_TRUE(x->header.case_roots.has_value());
    EXPECT_FALSE(y->header.case_roots.has_value());
  }
}

TEST(Ledger, HeaderTimestampsAreMonotonic) {
  Cast cast;
  std::int64_t t = 500;
  Ledger ledger(cast.genesis(), {1, true}, [&] { return t -= 10; });
  for (const auto& tx : cast.setups()) ledger.submit_transaction(tx);
  ledger.seal_all();
  for (std::uint64_t i = 1; i < ledger.height(); ++i)
    EXPECT_GE(ledger.header(i).timestamp_ms, ledger.header(i - 1).timestamp_ms);
}

TEST(Ledger, TamperingWithSealedTransactionsIsDetected) {
  Fixture f = small_fixture(4, 20, 4);
  auto blocks = f.ledger->blocks();
  std::vector<Block> copy;
  for (const auto& b : blocks) copy.push_back(*b);
  EXPECT_TRUE(validate_chain(copy).ok);

  auto mutated = copy;
  mutated[7].transactions[3].timestamp_ms += 1;
  auto v = validate_chain(mutated);
  EXPECT_FALSE(v.ok);
  ASSERT_TRUE(v.first_invalid_block);
  EXPECT_LE(*v.first_invalid_block, 7u);

  mutated = copy;
  mutated[5].records[0].payload.begin()->second += "x";
  v = validate_chain(mutated);
  EXPECT_FALSE(v.ok);
  EXPECT_LE(*v.first_invalid_block, 5u);

  // Re-finalizing the changed transaction still breaks the body root.
  mutated = copy;
  mutated[9].transactions[0].timestamp_ms += 1;
  mutated[9].transactions[0] = finalize(mutated[9].transactions[0]);
  EXPECT_FALSE(validate_chain(mutated).ok);
}

TEST(Ledger, ReplayReproducesState) {
  Fixture f = small_fixture(6, 40, 5);
  std::vector<Block> blocks;
  for (const auto& b : f.ledger->blocks()) blocks.push_back(*b);
  auto replayed = Ledger::replay(f.workload.genesis_state(), f.ledger->config(), blocks);
  EXPECT_EQ(replayed->state_snapshot(), f.ledger->state_snapshot());
  EXPECT_EQ(replayed->state_snapshot().to_json().dump(), f.ledger->state_snapshot().to_json().dump());
  for (const auto& c : f.ledger->known_cases())
    EXPECT_EQ(replayed->case_root_history(c), f.ledger->case_root_history(c));

  blocks[3].records.pop_back();
  try {
    Ledger::replay(f.workload.genesis_state(), f.ledger->config(), blocks);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ReplayMismatch);
  }
}

TEST(Ledger, BlockFilesRoundTrip) {
  Fixture f = small_fixture(8, 12, 3);
  auto dir = std::filesystem::temp_directory_path() / ("caseledger-blocks-" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  for (const auto& b : f.ledger->blocks()) write_block_file(dir, *b);
  auto read = read_block_files(dir);
  ASSERT_EQ(read.size(), f.ledger->height());
  for (std::size_t i = 0; i < read.size(); ++i) {
    EXPECT_EQ(read[i].header, f.ledger->header(i));
    EXPECT_EQ(read[i].transactions, f.ledger->block(i)->transactions);
    EXPECT_EQ(read[i].records, f.ledger->block(i)->records);
  }
  std::filesystem::remove_all(dir);
}

TEST(Ledger, ReadersRunConcurrentlyWithSealing) {
  WorkloadSpec spec;
  spec.num_blocks = 60;
  spec.num_cases = 6;
  Workload w = generate_workload(spec);
  Ledger ledger(w.genesis_state(), {10, true}, counter());
  for (const auto& tx : w.setup) ledger.submit_transaction(tx);
  ledger.seal_genesis();
  for (const auto& tx : w.transactions) ledger.submit_transaction(tx);

  std::atomic<bool> done{false};
  std::atomic<std::size_t> reads{0};
  std::vector<std::thread> readers;
  for (int r = 0; r < 3; ++r)
    readers.emplace_back([&] {
      while (!done) {
        auto blocks = ledger.blocks();
        if (!validate_chain(blocks).ok) ADD_FAILURE() << "reader saw an invalid prefix";
        for (const auto& c : ledger.known_cases()) ledger.latest_case_root(c);
        ++reads;
      }
    });
  ledger.seal_all();
  done = true;
  for (auto& t : readers) t.join();
  EXPECT_GT(reads.load(), 0u);
  EXPECT_EQ(ledger.height(), 61u);
}
