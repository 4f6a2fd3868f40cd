#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "caseledger/types.hpp"

namespace caseledger {

using ojson = nlohmann::ordered_json;

// JSON forms use fixed field order and lowercase hex for every digest and
// key. Decoders throw Error(InvalidEncoding) on any structural problem.

ojson transaction_to_json(const Transaction& tx);
Transaction transaction_from_json(const nlohmann::json& j);

ojson record_to_json(const ProvenanceRecord& record);
ProvenanceRecord record_from_json(const nlohmann::json& j);

/// Single-line record encoding used by the off-chain store.
std::string record_to_line(const ProvenanceRecord& record);
/// Parses a line and requires it to be byte-identical to the canonical
/// encoding of what it decodes to.
ProvenanceRecord record_from_line(std::string_view line);

ojson header_to_json(const BlockHeader& header);
BlockHeader header_from_json(const nlohmann::json& j);

ojson block_to_json(const Block& block);
Block block_from_json(const nlohmann::json& j);

}  // namespace caseledger
