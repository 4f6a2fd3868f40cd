#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "caseledger/ledger.hpp"
#include "caseledger/record_store.hpp"

namespace caseledger {

enum class ExtractionMethod : std::uint8_t { BruteForce, SmartBruteForce, OffchainVerified };

std::string_view to_string(ExtractionMethod m) noexcept;
/// Accepts "brute", "smart", "offchain".
std::optional<ExtractionMethod> parse_extraction_method(std::string_view s) noexcept;

struct ExtractionResult {
  CaseId case_id{"-"};
  std::vector<ProvenanceRecord> records;
  ExtractionMethod method = ExtractionMethod::BruteForce;
  std::uint64_t blocks_scanned = 0;
  std::chrono::nanoseconds elapsed{0};
  /// Present exactly for OffchainVerified.
  std::optional<VerificationReport> verification;
};

/// Scans every block from genesis. An absent case yields no records.
ExtractionResult extract_brute_force(const Ledger& ledger, const CaseId& case_id);

/// Scans from the case's initial block. Throws Error(UnknownCase).
ExtractionResult extract_smart_brute_force(const Ledger& ledger, const CaseId& case_id);

/// Reads the case from the store and checks it against the chain's latest
/// case root; no block bodies are read. Tampered data is returned flagged
/// Compromised rather than refused. Throws Error(UnknownCase).
ExtractionResult extract_offchain_verified(const RecordStore& store, const Ledger& ledger, const CaseId& case_id);

ExtractionResult extract(ExtractionMethod method, const RecordStore& store, const Ledger& ledger,
                         const CaseId& case_id);

}  // namespace caseledger
