#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "caseledger/contracts.hpp"
#include "caseledger/rbac.hpp"
#include "caseledger/types.hpp"

namespace caseledger {

/// Relative weights for the non-creating transaction kinds.
struct TxMix {
  double file_upload = 0.4;
  double analysis = 0.2;
  double access_request = 0.2;
  double stage = 0.1;
  double provenance = 0.1;
};

struct WorkloadSpec {
  std::size_t num_cases = 100;
  std::size_t num_blocks = 1000;
  std::size_t tx_per_block = 10;
  std::uint64_t seed = 1;
  TxMix tx_mix;
  std::size_t users_per_role = 2;
  PolicyMatrix policy = PolicyMatrix::defaults();
  std::int64_t base_time_ms = 1'700'000'000'000;

  std::size_t total_transactions() const noexcept { return num_blocks * tx_per_block; }
};

struct WorkloadUser {
  std::string name;
  Role role;
  KeyPair keys;
};

struct Workload {
  KeyPair admin;
  std::vector<WorkloadUser> users;
  /// Setup transactions registering `users`; sealed into the genesis block.
  std::vector<Transaction> setup;
  /// num_blocks x tx_per_block case transactions.
  std::vector<Transaction> transactions;
  /// Case ids in creation order.
  std::vector<CaseId> cases;
  PolicyMatrix policy;

  /// Empty contract state with `admin` as the only Setup authority.
  ContractState genesis_state() const;
};

/// Deterministic under spec.seed. Every case starts with an InitialUpload at
/// a uniformly random stage; creations are spread uniformly over the stream.
/// Senders are chosen among users the policy allows to perform the drawn
/// kind, Analysis parents are tokens already minted in the same case, and a
/// kind with no eligible sender or parent is redrawn. Throws
/// Error(InfeasibleSpec) when num_cases is 0, tx_per_block is 0, or there are
/// fewer transactions than cases.
Workload generate_workload(const WorkloadSpec& spec);

/// Deterministic key pair for (seed, index).
KeyPair derive_workload_key(std::uint64_t seed, std::uint64_t index);

/// Uniform integer in [0, bound) from the raw 64-bit generator output;
/// independent of the standard library's distribution implementation.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);
/// Uniform double in [0, 1).
double uniform_unit(std::mt19937_64& rng);

}  // namespace caseledger
