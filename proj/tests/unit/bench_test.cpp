#include <gtest/gtest.h>

#include <sstream>

#include "caseledger/bench.hpp"
#include "caseledger/stats.hpp"

using namespace caseledger;

TEST(Stats, QuartilesUseLinearInterpolation) {
  auto s = summarize({1, 2, 3, 4});
  EXPECT_EQ(s.samples, 4u);
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_DOUBLE_EQ(s.median, 2.5);
  EXPECT_DOUBLE_EQ(s.q1, 1.75);
  EXPECT_DOUBLE_EQ(s.q3, 3.25);
  EXPECT_DOUBLE_EQ(s.max, 4);
  EXPECT_DOUBLE_EQ(s.iqr(), 1.5);
  auto one = summarize({7});
  EXPECT_DOUBLE_EQ(one.q1, 7);
  EXPECT_DOUBLE_EQ(one.q3, 7);
}

TEST(Csv, HeaderAndRowShape) {
  EXPECT_EQ(csv_header(), "experiment,blocks,cases,method_or_kind,samples,mean_ns,median_ns,q1_ns,q3_ns,max_ns");
  BenchRow row{"retrieval", 1000, 100, "smart", summarize({10, 20, 30})};
  EXPECT_EQ(csv_line(row), "retrieval,1000,100,smart,3,20.0,20.0,15.0,25.0,30.0");
  std::ostringstream os;
  write_csv(os, {row, row});
  const std::string text = os.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
}

TEST(Bench, RetrievalRowCount) {
  RetrievalOptions o;
  o.blocks_grid = {40};
  o.cases_grid = {5};
  o.reps = 10;
  auto report = run_retrieval_benchmark(o);
  ASSERT_EQ(report.rows.size(), 3u);
  for (const auto& row : report.rows) EXPECT_EQ(row.stats.samples, 10u);
  EXPECT_EQ(report.samples.size(), 30u);
  for (const auto& s : report.samples) {
    if (s.method == ExtractionMethod::OffchainVerified) {
      EXPECT_EQ(s.verdict, Verdict::Verified);
      EXPECT_EQ(s.blocks_scanned, 0u);
    }
  }
  o.blocks_grid.clear();
  EXPECT_THROW(run_retrieval_benchmark(o), Error);
}

TEST(Bench, OverheadSealsIdenticalBodies) {
  WorkloadSpec spec;
  spec.num_blocks = 30;
  spec.num_cases = 5;
  auto report = run_overhead_benchmark(spec, 2);
  EXPECT_TRUE(report.identical_bodies);
  EXPECT_EQ(report.with_roots_ns.size(), 60u);
  EXPECT_EQ(report.without_roots_ns.size(), 60u);
  ASSERT_EQ(report.rows.size(), 2u);
}

TEST(Bench, TxTimeCoversEveryKind) {
  WorkloadSpec spec;
  spec.num_blocks = 20;
  spec.num_cases = 4;
  auto report = run_txtime_benchmark(spec, 12);
  std::set<std::string> kinds;
  for (const auto& row : report.rows) {
    kinds.insert(row.method_or_kind);
    EXPECT_GE(row.stats.samples, 12u);
  }
  EXPECT_EQ(kinds, (std::set<std::string>{"Setup", "InitialUpload", "FileUpload", "Analysis", "AccReq", "Stage",
                                          "Provenance", "Write", "Read"}));
}
