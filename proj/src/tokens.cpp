#include "caseledger/tokens.hpp"

#include <algorithm>
#include <set>

#include "caseledger/error.hpp"

namespace caseledger {

namespace {

constexpr std::uint8_t kOriginalForm = 0x00;
constexpr std::uint8_t kDerivedForm = 0x01;

void update_time(Hasher& h, std::int64_t time_ms) {
  h.update_u32(8);
  h.update_u64(static_cast<std::uint64_t>(time_ms));
}

}  // namespace

Digest original_token_id(const CaseId& case_id, std::string_view file_id, const Digest& content,
                         std::int64_t time_ms) {
  Hasher h(tag::kToken);
  h.update_byte(kOriginalForm);
  h.update_prefixed(case_id.str());
  h.update_prefixed(file_id);
  h.update(content);
  update_time(h, time_ms);
  return h.finish();
}

Digest derived_token_id(std::span<const Digest> parents, std::int64_t time_ms) {
  Hasher h(tag::kToken);
  h.update_byte(kDerivedForm);
  for (const auto& parent : parents) h.update(parent);
  update_time(h, time_ms);
  return h.finish();
}

const Token& DependencyGraph::insert(Token token) {
  if (nodes_.contains(token.id)) throw Error(Errc::DuplicateToken, token.id.hex());
  order_.push_back(token.id);
  auto [it, _] = nodes_.emplace(token.id, std::move(token));
  return it->second;
}

const Token& DependencyGraph::mint_original(std::string file_id, const Digest& content, std::int64_t time_ms) {
  Token t;
  t.id = original_token_id(case_id_, file_id, content, time_ms);
  t.case_id = case_id_;
  t.kind = TokenKind::Original;
  t.created_at = time_ms;
  t.source = std::move(file_id);
  return insert(std::move(t));
}

const Token& DependencyGraph::derive(std::vector<Digest> parents, std::int64_t time_ms) {
  if (parents.empty()) throw Error(Errc::EmptyParents, "derived token needs at least one parent");
  for (const auto& p : parents)
    if (!nodes_.contains(p)) throw Error(Errc::UnknownParent, p.hex());
  Token t;
  t.id = derived_token_id(parents, time_ms);
  t.case_id = case_id_;
  t.kind = TokenKind::Derived;
  t.parents = std::move(parents);
  t.created_at = time_ms;
  return insert(std::move(t));
}

const Token& DependencyGraph::at(const Digest& id) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw Error(Errc::UnknownToken, id.hex());
  return it->second;
}

std::vector<Digest> DependencyGraph::ancestry_of(const Digest& id) const {
  const Token& start = at(id);

  std::set<Digest> ancestors;
  std::vector<Digest> stack(start.parents.begin(), start.parents.end());
  while (!stack.empty()) {
    Digest cur = stack.back();
    stack.pop_back();
    if (!ancestors.insert(cur).second) continue;
    for (const auto& p : nodes_.at(cur).parents) stack.push_back(p);
  }

  // Count, for each ancestor, how many of its children inside the sub-DAG
  // (ancestors plus the start node) are still pending.
  std::map<Digest, std::size_t> pending_children;
  for (const auto& a : ancestors) pending_children[a] = 0;
  auto count_edges = [&](const Token& child) {
    for (const auto& p : std::set<Digest>(child.parents.begin(), child.parents.end())) ++pending_children[p];
  };
  count_edges(start);
  for (const auto& a : ancestors) count_edges(nodes_.at(a));

  std::set<Digest> ready;
  auto release = [&](const Token& child) {
    for (const auto& p : std::set<Digest>(child.parents.begin(), child.parents.end()))
      if (--pending_children[p] == 0) ready.insert(p);
  };
  release(start);

  std::vector<Digest> out;
  out.reserve(ancestors.size());
  while (!ready.empty()) {
    Digest next = *ready.begin();
    ready.erase(ready.begin());
    out.push_back(next);
    release(nodes_.at(next));
  }
  return out;
}

nlohmann::ordered_json DependencyGraph::to_json() const {
  nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
  for (const auto& id : order_) {
    const Token& t = nodes_.at(id);
    nlohmann::ordered_json parents = nlohmann::ordered_json::array();
    for (const auto& p : t.parents) parents.push_back(p.hex());
    nodes.push_back({{"id", t.id.hex()},
                     {"kind", t.kind == TokenKind::Original ? "original" : "derived"},
                     {"parents", std::move(parents)},
                     {"created_at", t.created_at},
                     {"source", t.source}});
  }
  return {{"case", case_id_.str()}, {"nodes", std::move(nodes)}};
}

void TokenRegistry::open_case(const CaseId& case_id) { graphs_.try_emplace(case_id, case_id); }

DependencyGraph& TokenRegistry::mutable_graph(const CaseId& case_id) {
  auto it = graphs_.find(case_id);
  if (it == graphs_.end()) throw Error(Errc::UnknownCase, case_id.str());
  return it->second;
}

const DependencyGraph& TokenRegistry::graph(const CaseId& case_id) const {
  auto it = graphs_.find(case_id);
  if (it == graphs_.end()) throw Error(Errc::UnknownCase, case_id.str());
  return it->second;
}

Token TokenRegistry::mint_original(const CaseId& case_id, std::string file_id, const Digest& content,
                                   std::int64_t time_ms) {
  return mutable_graph(case_id).mint_original(std::move(file_id), content, time_ms);
}

Token TokenRegistry::derive_token(const CaseId& case_id, std::vector<Digest> parents, std::int64_t time_ms) {
  return mutable_graph(case_id).derive(std::move(parents), time_ms);
}

std::vector<Digest> TokenRegistry::ancestry_of(const CaseId& case_id, const Digest& token) const {
  return graph(case_id).ancestry_of(token);
}

}  // namespace caseledger
