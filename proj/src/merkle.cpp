#include "caseledger/merkle.hpp"

#include <vector>

#include "caseledger/error.hpp"

namespace caseledger {

Digest merkle_leaf_hash(const Digest& leaf) { return Hasher(tag::kMerkleLeaf).update(leaf).finish(); }

Digest merkle_node_hash(const Digest& left, const Digest& right) {
  return Hasher(tag::kMerkleNode).update(left).update(right).finish();
}

Digest merkle_root(std::span<const Digest> leaves) {
  if (leaves.empty()) throw Error(Errc::EmptyLeaves, "merkle_root over zero leaves");

  std::vector<Digest> level;
  level.reserve(leaves.size());
  for (const auto& leaf : leaves) level.push_back(merkle_leaf_hash(leaf));

  while (level.size() > 1) {
    std::vector<Digest> next;
    next.reserve((level.size() + 1) / 2);
    for (std::size_t i = 0; i < level.size(); i += 2) {
      const Digest& left = level[i];
      const Digest& right = i + 1 < level.size() ? level[i + 1] : level[i];
      next.push_back(merkle_node_hash(left, right));
    }
    level = std::move(next);
  }
  return level.front();
}

Digest chain_case_root(const Digest& previous, const Digest& block_case_root) {
  return Hasher(tag::kCaseRoot).update(previous).update(block_case_root).finish();
}

}  // namespace caseledger
