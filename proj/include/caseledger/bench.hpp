#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "caseledger/extraction.hpp"
#include "caseledger/ledger.hpp"
#include "caseledger/record_store.hpp"
#include "caseledger/stats.hpp"
#include "caseledger/workload.hpp"

namespace caseledger {

/// A sealed chain plus its off-chain store, built from a generated workload.
struct Fixture {
  Workload workload;
  std::unique_ptr<RecordStore> store;
  std::unique_ptr<Ledger> ledger;
};

struct FixtureOptions {
  bool with_case_roots = true;
  const Sealer* sealer = nullptr;
  /// Block timestamps; defaults to a deterministic counter.
  Clock clock;
};

/// Genesis holds the Setup transactions; the workload fills the following
/// num_blocks blocks.
Fixture build_fixture(const WorkloadSpec& spec, const FixtureOptions& options = {});

struct BenchRow {
  std::string experiment;
  std::size_t blocks = 0;
  std::size_t cases = 0;
  std::string method_or_kind;
  SampleStats stats;
};

/// experiment,blocks,cases,method_or_kind,samples,mean_ns,median_ns,q1_ns,q3_ns,max_ns
std::string csv_header();
std::string csv_line(const BenchRow& row);
void write_csv(std::ostream& out, const std::vector<BenchRow>& rows);
void write_csv(const std::filesystem::path& path, const std::vector<BenchRow>& rows);

struct RetrievalOptions {
  /// A zero-block chain holds no data, so the grid starts at 1000.
  std::vector<std::size_t> blocks_grid{1000, 2500, 5000, 7500, 10000};
  std::vector<std::size_t> cases_grid{100, 500, 1000};
  std::size_t reps = 30;
  std::uint64_t seed = 1;
  std::size_t tx_per_block = 10;
};

struct RetrievalSample {
  std::size_t blocks = 0;
  std::size_t cases = 0;
  CaseId case_id{"-"};
  ExtractionMethod method = ExtractionMethod::BruteForce;
  std::uint64_t blocks_scanned = 0;
  std::uint64_t chain_height = 0;
  double elapsed_ns = 0;
  std::size_t record_count = 0;
  std::optional<Verdict> verdict;
};

struct RetrievalReport {
  std::vector<BenchRow> rows;  // one per (cell, method)
  std::vector<RetrievalSample> samples;
};

/// For each (blocks, cases) cell: build a fixture, sample `reps` cases, and
/// time all three extraction methods on each (interleaved).
RetrievalReport run_retrieval_benchmark(const RetrievalOptions& options);

struct OverheadReport {
  std::vector<BenchRow> rows;  // with_case_roots / without_case_roots
  std::vector<double> with_roots_ns;
  std::vector<double> without_roots_ns;
  /// Block bodies from both runs were identical apart from case_roots.
  bool identical_bodies = true;
};

/// Seals the same workload with and without per-case roots, `reps` times
/// each, and reports per-block sealing time.
OverheadReport run_overhead_benchmark(const WorkloadSpec& spec, std::size_t reps);

struct TxTimeReport {
  std::vector<BenchRow> rows;  // one per kind, plus Write and Read baselines
};

/// Times apply_transaction per transaction kind against a state built from
/// `spec`, alongside plain log Write/Read baselines.
TxTimeReport run_txtime_benchmark(const WorkloadSpec& spec, std::size_t reps);

}  // namespace caseledger
