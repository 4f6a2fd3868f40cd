#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "caseledger/rbac.hpp"
#include "caseledger/sealer.hpp"
#include "caseledger/tokens.hpp"
#include "caseledger/types.hpp"

namespace caseledger {

/// Per-case contract held by the tokenized contract.
struct CaseContract {
  CaseId case_number{"-"};
  std::int64_t timestamp_ms = 0;
  std::uint64_t initial_block_number = 0;
  Stage current_stage = Stage::AffidavitWarrant;
  std::vector<Digest> token_list;
  std::set<Role> roles_involved;

  bool operator==(const CaseContract&) const = default;
};

struct AccessControlState {
  std::set<CaseId> case_list;
  std::map<CaseId, Stage> stage_mirror;
  UserRegistry registry;
  PolicyMatrix policy = PolicyMatrix::defaults();
  /// Keys allowed to send Setup transactions.
  std::set<Digest> admins;

  bool operator==(const AccessControlState&) const = default;
};

/// Combined state of the tokenized, case, and access-control contracts. The
/// provenance contract is stateless: its output is the record stream.
struct ContractState {
  std::map<CaseId, CaseContract> cases;
  TokenRegistry tokens;
  AccessControlState access;

  /// Deterministic export used for replay comparisons and `state.json`.
  nlohmann::ordered_json to_json() const;

  bool operator==(const ContractState&) const = default;
};

enum class ApplyStatus : std::uint8_t { Applied, Rejected };

struct Effects {
  ApplyStatus status = ApplyStatus::Applied;
  std::vector<ProvenanceRecord> records;
  std::vector<SealedPayload> receipts;
  /// Access outcome or policy reason when rejected.
  std::string rejection;
  /// Token minted by FileUpload or Analysis.
  std::optional<Digest> token;
};

struct ApplyContext {
  /// Receipts are only produced when a sealer is supplied.
  const Sealer* sealer = nullptr;
  /// Latest per-case roots before this block, quoted in provenance receipts.
  const std::map<CaseId, Digest>* case_roots = nullptr;
};

/// Applies one transaction at `block_index`.
///
/// Precondition failures throw without touching `state`: Error(CaseExists),
/// Error(UnknownCase), Error(UnknownParent), Error(DuplicateToken),
/// Error(AlreadyRegistered), Error(MissingField). Access-control refusals are
/// not errors: they return status Rejected with an AccessValidity record and
/// leave contract and token state unchanged.
Effects apply_transaction(ContractState& state, const Transaction& tx, std::uint64_t block_index,
                          const ApplyContext& ctx = {});

/// Throws Error(UnknownCase).
CaseContract case_state(const ContractState& state, const CaseId& case_id);

}  // namespace caseledger
