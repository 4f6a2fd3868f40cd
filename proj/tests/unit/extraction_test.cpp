#include <gtest/gtest.h>

#include <algorithm>

#include "caseledger/bench.hpp"
#include "caseledger/extraction.hpp"
#include "caseledger/json_codec.hpp"
#include "support.hpp"

using namespace caseledger;
using namespace support;

namespace {

std::vector<std::string> as_sorted_lines(const std::vector<ProvenanceRecord>& records) {
  std::vector<std::string> out;
  for (const auto& r : records) out.push_back(record_to_line(r));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(Extraction, MethodParsing) {
  EXPECT_EQ(parse_extraction_method("brute"), ExtractionMethod::BruteForce);
  EXPECT_EQ(parse_extraction_method("smart"), ExtractionMethod::SmartBruteForce);
  EXPECT_EQ(parse_extraction_method("offchain"), ExtractionMethod::OffchainVerified);
  EXPECT_FALSE(parse_extraction_method("fast"));
}

TEST(Extraction, AllMethodsAgree) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    WorkloadSpec spec;
    spec.num_blocks = 60;
    spec.num_cases = 7;
    spec.seed = seed;
    Fixture f = build_fixture(spec);
    for (const auto& c : f.workload.cases) {
      auto brute = extract_brute_force(*f.ledger, c);
      auto smart = extract_smart_brute_force(*f.ledger, c);
      auto off = extract_offchain_verified(*f.store, *f.ledger, c);
      EXPECT_EQ(brute.records, smart.records);
      EXPECT_EQ(as_sorted_lines(brute.records), as_sorted_lines(off.records));
      EXPECT_EQ(brute.blocks_scanned, f.ledger->height());
      EXPECT_EQ(smart.blocks_scanned, f.ledger->height() - f.ledger->case_state(c).initial_block_number);
      EXPECT_LE(smart.blocks_scanned, brute.blocks_scanned);
      EXPECT_EQ(off.blocks_scanned, 0u);
      ASSERT_TRUE(off.verification);
      EXPECT_EQ(off.verification->verdict, Verdict::Verified);
      EXPECT_FALSE(brute.verification);
      EXPECT_FALSE(smart.verification);
    }
  }
}

TEST(Extraction, AbsentCase) {
  WorkloadSpec spec;
  spec.num_blocks = 10;
  spec.num_cases = 2;
  Fixture f = build_fixture(spec);
  auto brute = extract_brute_force(*f.ledger, CaseId("absent"));
  EXPECT_TRUE(brute.records.empty());
  EXPECT_EQ(brute.blocks_scanned, f.ledger->height());
  EXPECT_THROW(extract_smart_brute_force(*f.ledger, CaseId("absent")), Error);
  EXPECT_THROW(extract_offchain_verified(*f.store, *f.ledger, CaseId("absent")), Error);
}

TEST(Extraction, CaseCreatedInLastBlockScansOneBlock) {
  Cast cast;
  RecordStore store;
  Ledger ledger(cast.genesis(), {1, true});
  ledger.set_record_sink(&store);
  for (const auto& tx : cast.setups()) ledger.submit_transaction(tx);
  ledger.seal_genesis();
  ledger.submit_transaction(initial_upload(cast.officer, "A", Stage::Analysis, "a", 10));
  ledger.submit_transaction(initial_upload(cast.officer, "B", Stage::Analysis, "b", 11));
  ledger.seal_all();
  EXPECT_EQ(extract_smart_brute_force(ledger, CaseId("B")).blocks_scanned, 1u);
  auto off = extract_offchain_verified(store, ledger, CaseId("B"));
  EXPECT_EQ(off.records.size(), 4u);
}

TEST(Extraction, OffchainReadsNoBlockBodies) {
  WorkloadSpec spec;
  spec.num_blocks = 30;
  spec.num_cases = 4;
  Fixture f = build_fixture(spec);
  auto before = f.ledger->body_reads();
  for (const auto& c : f.workload.cases) extract_offchain_verified(*f.store, *f.ledger, c);
  EXPECT_EQ(f.ledger->body_reads(), before);
  extract_smart_brute_force(*f.ledger, f.workload.cases.front());
  EXPECT_GT(f.ledger->body_reads(), before);
}

TEST(Extraction, TamperedStoreIsFlaggedAndSmartFallbackRecovers) {
  WorkloadSpec spec;
  spec.num_blocks = 30;
  spec.num_cases = 3;
  Fixture f = build_fixture(spec);
  CaseId c = f.workload.cases.front();
  auto lines = f.store->case_lines(c);
  lines.erase(lines.begin() + 2);
  f.store->replace_case_lines(c, lines);

  auto off = extract_offchain_verified(*f.store, *f.ledger, c);
  ASSERT_TRUE(off.verification);
  EXPECT_EQ(off.verification->verdict, Verdict::Compromised);
  EXPECT_FALSE(off.records.empty());
  auto truth = extract_smart_brute_force(*f.ledger, c);
  EXPECT_EQ(truth.records.size(), lines.size() + 1);
}
