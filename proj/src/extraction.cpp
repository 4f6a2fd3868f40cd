#include "caseledger/extraction.hpp"

namespace caseledger {

namespace {

using SteadyClock = std::chrono::steady_clock;

void scan(const Ledger& ledger, const CaseId& case_id, std::uint64_t from, ExtractionResult& out) {
  const std::uint64_t height = ledger.height();
  for (std::uint64_t i = from; i < height; ++i) {
    auto block = ledger.block(i);
    for (const auto& r : block->records)
      if (r.case_id && *r.case_id == case_id) out.records.push_back(r);
    ++out.blocks_scanned;
  }
}

}  // namespace

std::string_view to_string(ExtractionMethod m) noexcept {
  switch (m) {
    case ExtractionMethod::BruteForce: return "brute";
    case ExtractionMethod::SmartBruteForce: return "smart";
    case ExtractionMethod::OffchainVerified: return "offchain";
  }
  return "?";
}

std::optional<ExtractionMethod> parse_extraction_method(std::string_view s) noexcept {
  for (auto m : {ExtractionMethod::BruteForce, ExtractionMethod::SmartBruteForce, ExtractionMethod::OffchainVerified})
    if (to_string(m) == s) return m;
  return std::nullopt;
}

ExtractionResult extract_brute_force(const Ledger& ledger, const CaseId& case_id) {
  auto start = SteadyClock::now();
  ExtractionResult out;
  out.case_id = case_id;
  out.method = ExtractionMethod::BruteForce;
  scan(ledger, case_id, 0, out);
  out.elapsed = SteadyClock::now() - start;
  return out;
}

ExtractionResult extract_smart_brute_force(const Ledger& ledger, const CaseId& case_id) {
  auto start = SteadyClock::now();
  ExtractionResult out;
  out.case_id = case_id;
  out.method = ExtractionMethod::SmartBruteForce;
  scan(ledger, case_id, ledger.case_state(case_id).initial_block_number, out);
  out.elapsed = SteadyClock::now() - start;
  return out;
}

ExtractionResult extract_offchain_verified(const RecordStore& store, const Ledger& ledger, const CaseId& case_id) {
  auto start = SteadyClock::now();
  ExtractionResult out;
  out.case_id = case_id;
  out.method = ExtractionMethod::OffchainVerified;
  auto [root, _] = ledger.latest_case_root(case_id);
  auto fetched = store.fetch_verified(case_id, root);
  if (fetched.report.verdict == Verdict::Compromised) {
    // Locate the damage; header-only lookups.
    auto history = ledger.case_root_history(case_id);
    fetched.report = store.verify_case_records(case_id, root, history);
  }
  out.records = std::move(fetched.records);
  out.verification = std::move(fetched.report);
  out.elapsed = SteadyClock::now() - start;
  return out;
}

ExtractionResult extract(ExtractionMethod method, const RecordStore& store, const Ledger& ledger,
                         const CaseId& case_id) {
  switch (method) {
    case ExtractionMethod::BruteForce: return extract_brute_force(ledger, case_id);
    case ExtractionMethod::SmartBruteForce: return extract_smart_brute_force(ledger, case_id);
    case ExtractionMethod::OffchainVerified: return extract_offchain_verified(store, ledger, case_id);
  }
  return extract_brute_force(ledger, case_id);
}

}  // namespace caseledger
