#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "caseledger/types.hpp"

namespace caseledger {

enum class TokenKind : std::uint8_t { Original, Derived };

/// Version identity of one file. Derived tokens commit to their parents.
struct Token {
  Digest id;
  CaseId case_id{"-"};
  TokenKind kind = TokenKind::Original;
  std::vector<Digest> parents;  // empty iff original
  std::int64_t created_at = 0;
  std::string source;  // file id, originals only

  bool operator==(const Token&) const = default;
};

/// SHA-256(0x03 || 0x00 || lp case || lp file_id || content || lp u64 time)
Digest original_token_id(const CaseId& case_id, std::string_view file_id, const Digest& content,
                         std::int64_t time_ms);

/// SHA-256(0x03 || 0x01 || K_1 || ... || K_n || lp u64 time). Parent order matters.
Digest derived_token_id(std::span<const Digest> parents, std::int64_t time_ms);

/// Hash-linked DAG of one case's file versions. Nodes only ever reference
/// existing nodes, so the graph is acyclic by construction.
class DependencyGraph {
 public:
  explicit DependencyGraph(CaseId case_id) : case_id_(std::move(case_id)) {}

  const CaseId& case_id() const noexcept { return case_id_; }

  /// Throws Error(DuplicateToken).
  const Token& mint_original(std::string file_id, const Digest& content, std::int64_t time_ms);
  /// Throws Error(EmptyParents), Error(UnknownParent) or Error(DuplicateToken).
  const Token& derive(std::vector<Digest> parents, std::int64_t time_ms);

  bool contains(const Digest& id) const { return nodes_.contains(id); }
  /// Throws Error(UnknownToken).
  const Token& at(const Digest& id) const;

  /// Transitive parents of `id`, nearest first: a node is emitted once every
  /// descendant of it inside the ancestor set has been; ties go to the
  /// smaller id. Throws Error(UnknownToken).
  std::vector<Digest> ancestry_of(const Digest& id) const;

  /// Insertion order.
  const std::vector<Digest>& order() const noexcept { return order_; }
  std::size_t size() const noexcept { return nodes_.size(); }

  /// {"case": ..., "nodes": [{id, kind, parents, created_at, source}]}
  nlohmann::ordered_json to_json() const;

  bool operator==(const DependencyGraph&) const = default;

 private:
  const Token& insert(Token token);

  CaseId case_id_;
  std::map<Digest, Token> nodes_;
  std::vector<Digest> order_;
};

/// All case graphs; the tokenized contract owns one of these.
class TokenRegistry {
 public:
  void open_case(const CaseId& case_id);
  bool has_case(const CaseId& case_id) const { return graphs_.contains(case_id); }

  /// Throws Error(UnknownCase) or Error(DuplicateToken).
  Token mint_original(const CaseId& case_id, std::string file_id, const Digest& content, std::int64_t time_ms);
  /// Throws Error(UnknownCase), Error(EmptyParents), Error(UnknownParent).
  Token derive_token(const CaseId& case_id, std::vector<Digest> parents, std::int64_t time_ms);
  std::vector<Digest> ancestry_of(const CaseId& case_id, const Digest& token) const;

  const DependencyGraph& graph(const CaseId& case_id) const;
  const std::map<CaseId, DependencyGraph>& graphs() const noexcept { return graphs_; }

  bool operator==(const TokenRegistry&) const = default;

 private:
  DependencyGraph& mutable_graph(const CaseId& case_id);

  std::map<CaseId, DependencyGraph> graphs_;
};

}  // namespace caseledger
