#pragma once

#include <span>

#include "caseledger/digest.hpp"

namespace caseledger {

/// SHA-256(0x00 || leaf)
Digest merkle_leaf_hash(const Digest& leaf);
/// SHA-256(0x01 || left || right)
Digest merkle_node_hash(const Digest& left, const Digest& right);

/// Binary Merkle root. Leaves are hashed with the leaf prefix, an odd node at
/// any level is paired with itself. Throws Error(EmptyLeaves) on empty input.
Digest merkle_root(std::span<const Digest> leaves);

/// Per-case chaining step: SHA-256(0x04 || previous || block_case_root).
/// The first block of a case uses the all-zero digest as `previous`.
Digest chain_case_root(const Digest& previous, const Digest& block_case_root);

}  // namespace caseledger
