#pragma once

#include <span>

#include "caseledger/types.hpp"

namespace caseledger {

// Canonical transaction layout (all integers big-endian, `lp` = u32 length
// prefix followed by the bytes):
//
//   u8  kind
//   u8  has_case            [lp case]
//   lp  sender key bytes
//   u64 timestamp_ms        (two's complement)
//   u8  has_declared_stage  [lp declared_stage]
//   payload, by kind:
//     Setup          lp subject key, u8 role
//     InitialUpload  lp file_id, 32 content, u8 stage
//     FileUpload     lp file_id, 32 content
//     Analysis       u32 n, n x 32 parent token
//     AccReq         lp resource
//     Stage          u8 target stage
//     Provenance     (empty)
//
// The transaction id is SHA-256(0x02 || canonical bytes).

bool valid_utf8(std::string_view s) noexcept;

/// Throws Error(MissingField) when a kind-specific field is absent or empty,
/// Error(InvalidEncoding) when a text field is not UTF-8.
Bytes canonical_serialize(const Transaction& tx);

Digest transaction_id(const Transaction& tx);

// Record layout: u8 kind, u8 has_case [lp case], u64 block_number,
// 32 tx_id, u32 n, n x (lp key, lp value) in key order.
Bytes record_bytes(const ProvenanceRecord& record);

/// Commitment to one transaction's records for one case:
/// SHA-256(0x05 || tx_id || u32 n || n x lp(record_bytes)).
Digest record_commitment(const Digest& tx_id, std::span<const ProvenanceRecord* const> records);

/// SHA-256(0x06 || u64 index || prev_hash || u64 timestamp || body_root ||
/// u8 has_roots [u32 n, n x (lp case, 32 root)]), roots in case-id order.
Digest header_digest(const BlockHeader& header);

}  // namespace caseledger
