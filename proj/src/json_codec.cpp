#include "caseledger/json_codec.hpp"

#include "caseledger/error.hpp"
#include "caseledger/serialize.hpp"

namespace caseledger {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(Errc::InvalidEncoding, what); }

template <typename Json>
const Json& field(const Json& j, const char* name) {
  if (!j.is_object()) bad("expected object");
  auto it = j.find(name);
  if (it == j.end()) bad(std::string("missing field '") + name + "'");
  return *it;
}

template <typename Json>
std::string str_field(const Json& j, const char* name) {
  const auto& v = field(j, name);
  if (!v.is_string()) bad(std::string("field '") + name + "' must be a string");
  return v.template get<std::string>();
}

template <typename Json>
std::int64_t int_field(const Json& j, const char* name) {
  const auto& v = field(j, name);
  if (!v.is_number_integer()) bad(std::string("field '") + name + "' must be an integer");
  return v.template get<std::int64_t>();
}

template <typename Json>
std::uint64_t uint_field(const Json& j, const char* name) {
  const auto& v = field(j, name);
  if (!v.is_number_unsigned()) bad(std::string("field '") + name + "' must be a non-negative integer");
  return v.template get<std::uint64_t>();
}

template <typename Json>
Digest digest_field(const Json& j, const char* name) {
  return Digest::from_hex(str_field(j, name));
}

Stage stage_from(const std::string& s) {
  auto st = parse_stage(s);
  if (!st) bad("unknown stage '" + s + "'");
  return *st;
}

Role role_from(const std::string& s) {
  auto r = parse_role(s);
  if (!r) bad("unknown role '" + s + "'");
  return *r;
}

struct PayloadToJson {
  ojson operator()(const SetupPayload& p) const {
    return {{"subject", p.subject.hex()}, {"role", std::string(to_string(p.role))}};
  }
  ojson operator()(const InitialUploadPayload& p) const {
    return {{"file_id", p.file_id}, {"content", p.content.hex()}, {"stage", std::string(to_string(p.stage))}};
  }
  ojson operator()(const FileUploadPayload& p) const {
    return {{"file_id", p.file_id}, {"content", p.content.hex()}};
  }
  ojson operator()(const AnalysisPayload& p) const {
    ojson parents = ojson::array();
    for (const auto& d : p.parents) parents.push_back(d.hex());
    return {{"parents", std::move(parents)}};
  }
  ojson operator()(const AccessRequestPayload& p) const { return {{"resource", p.resource}}; }
  ojson operator()(const StagePayload& p) const { return {{"target", std::string(to_string(p.target))}}; }
  ojson operator()(const ProvenancePayload&) const { return ojson::object(); }
};

Payload payload_from_json(TransactionKind kind, const nlohmann::json& p) {
  switch (kind) {
    case TransactionKind::Setup:
      return SetupPayload{PublicKey(from_hex(str_field(p, "subject"))), role_from(str_field(p, "role"))};
    case TransactionKind::InitialUpload:
      return InitialUploadPayload{str_field(p, "file_id"), digest_field(p, "content"),
                                  stage_from(str_field(p, "stage"))};
    case TransactionKind::FileUpload:
      return FileUploadPayload{str_field(p, "file_id"), digest_field(p, "content")};
    case TransactionKind::Analysis: {
      AnalysisPayload out;
      const auto& parents = field(p, "parents");
      if (!parents.is_array()) bad("parents must be a list");
      for (const auto& d : parents) {
        if (!d.is_string()) bad("parent token must be a hex string");
        out.parents.push_back(Digest::from_hex(d.get<std::string>()));
      }
      return out;
    }
    case TransactionKind::AccReq:
      return AccessRequestPayload{str_field(p, "resource")};
    case TransactionKind::Stage:
      return StagePayload{stage_from(str_field(p, "target"))};
    case TransactionKind::Provenance:
      return ProvenancePayload{};
  }
  bad("unknown transaction kind");
}

}  // namespace

ojson transaction_to_json(const Transaction& tx) {
  ojson j;
  j["id"] = tx.id.hex();
  j["kind"] = std::string(to_string(tx.kind()));
  j["case"] = tx.case_id ? ojson(tx.case_id->str()) : ojson(nullptr);
  j["sender"] = tx.sender.hex();
  j["timestamp"] = tx.timestamp_ms;
  j["declared_stage"] = tx.declared_stage ? ojson(*tx.declared_stage) : ojson(nullptr);
  j["payload"] = std::visit(PayloadToJson{}, tx.payload);
  return j;
}

Transaction transaction_from_json(const nlohmann::json& j) {
  try {
    auto kind = parse_transaction_kind(str_field(j, "kind"));
    if (!kind) bad("unknown transaction kind");
    Transaction tx;
    const auto& c = field(j, "case");
    if (!c.is_null()) tx.case_id = CaseId(c.get<std::string>());
    tx.sender = PublicKey(from_hex(str_field(j, "sender")));
    tx.timestamp_ms = int_field(j, "timestamp");
    const auto& ds = field(j, "declared_stage");
    if (!ds.is_null()) tx.declared_stage = ds.get<std::string>();
    tx.payload = payload_from_json(*kind, field(j, "payload"));
    tx.id = digest_field(j, "id");
    return tx;
  } catch (const nlohmann::json::exception& e) {
    bad(e.what());
  }
}

ojson record_to_json(const ProvenanceRecord& record) {
  ojson j;
  j["block"] = record.block_number;
  j["case"] = record.case_id ? ojson(record.case_id->str()) : ojson(nullptr);
  j["kind"] = std::string(to_string(record.kind));
  ojson payload = ojson::object();
  for (const auto& [k, v] : record.payload) payload[k] = v;
  j["payload"] = std::move(payload);
  j["tx"] = record.tx_id.hex();
  return j;
}

ProvenanceRecord record_from_json(const nlohmann::json& j) {
  try {
    ProvenanceRecord r;
    r.block_number = uint_field(j, "block");
    const auto& c = field(j, "case");
    if (!c.is_null()) {
      if (!c.is_string()) bad("case must be a string");
      r.case_id = CaseId(c.get<std::string>());
    }
    auto kind = parse_record_kind(str_field(j, "kind"));
    if (!kind) bad("unknown record kind");
    r.kind = *kind;
    const auto& payload = field(j, "payload");
    if (!payload.is_object()) bad("payload must be an object");
    for (const auto& [k, v] : payload.items()) {
      if (!v.is_string()) bad("payload values must be strings");
      r.payload.emplace(k, v.get<std::string>());
    }
    r.tx_id = digest_field(j, "tx");
    if (j.size() != 5) bad("unexpected fields in record");
    return r;
  } catch (const nlohmann::json::exception& e) {
    bad(e.what());
  } catch (const Error& e) {
    if (e.code() == Errc::InvalidEncoding) throw;
    bad(e.what());
  }
}

namespace {

void append_escaped(std::string& out, std::string_view s) {
  static constexpr char kHex[] = "0123456789abcdef";
  out.push_back('"');
  for (char ch : s) {
    auto c = static_cast<unsigned char>(ch);
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          out += "\\u00";
          out.push_back(kHex[c >> 4]);
          out.push_back(kHex[c & 0x0f]);
        } else {
          out.push_back(ch);
        }
    }
  }
  out.push_back('"');
}

// Strict reader for the one canonical line form; anything the writer would
// not have produced is rejected.
class LineReader {
 public:
  explicit LineReader(std::string_view s) : s_(s) {}

  void expect(std::string_view lit) {
    if (s_.substr(i_, lit.size()) != lit) bad("record line is not in canonical form");
    i_ += lit.size();
  }
  bool peek(char c) const { return i_ < s_.size() && s_[i_] == c; }
  bool at_end() const { return i_ == s_.size(); }

  std::uint64_t u64() {
    std::size_t start = i_;
    std::uint64_t v = 0;
    while (i_ < s_.size() && s_[i_] >= '0' && s_[i_] <= '9') {
      auto d = static_cast<std::uint64_t>(s_[i_] - '0');
      if (v > (UINT64_MAX - d) / 10) bad("block number out of range");
      v = v * 10 + d;
      ++i_;
    }
    if (i_ == start || (s_[start] == '0' && i_ - start > 1)) bad("record line is not in canonical form");
    return v;
  }

  std::string string() {
    expect("\"");
    std::string out;
    while (true) {
      if (i_ >= s_.size()) bad("unterminated string");
      auto c = static_cast<unsigned char>(s_[i_++]);
      if (c == '"') break;
      if (c < 0x20) bad("raw control character in string");
      if (c != '\\') {
        out.push_back(static_cast<char>(c));
        continue;
      }
      if (i_ >= s_.size()) bad("unterminated escape");
      char e = s_[i_++];
      switch (e) {
        case '"': out.push_back('"'); break;
        case '\\': out.push_back('\\'); break;
        case 'b': out.push_back('\b'); break;
        case 'f': out.push_back('\f'); break;
        case 'n': out.push_back('\n'); break;
        case 'r': out.push_back('\r'); break;
        case 't': out.push_back('\t'); break;
        case 'u': {
          expect("00");
          int v = 0;
          for (int k = 0; k < 2; ++k) {
            if (i_ >= s_.size()) bad("unterminated escape");
            char h = s_[i_++];
            if (h >= '0' && h <= '9') {
              v = v * 16 + (h - '0');
            } else if (h >= 'a' && h <= 'f') {
              v = v * 16 + (h - 'a' + 10);
            } else {
              bad("record line is not in canonical form");
            }
          }
          if (v >= 0x20 || v == '\b' || v == '\f' || v == '\n' || v == '\r' || v == '\t')
            bad("record line is not in canonical form");
          out.push_back(static_cast<char>(v));
          break;
        }
        default: bad("record line is not in canonical form");
      }
    }
    if (!valid_utf8(out)) bad("string is not valid UTF-8");
    return out;
  }

 private:
  std::string_view s_;
  std::size_t i_ = 0;
};

}  // namespace

std::string record_to_line(const ProvenanceRecord& record) {
  for (const auto& [k, v] : record.payload)
    if (!valid_utf8(k) || !valid_utf8(v)) bad("record payload is not valid UTF-8");
  if (record.case_id && !valid_utf8(record.case_id->str())) bad("case id is not valid UTF-8");

  std::string out;
  out.reserve(160 + 80 * record.payload.size());
  out += "{\"block\":";
  out += std::to_string(record.block_number);
  out += ",\"case\":";
  if (record.case_id) {
    append_escaped(out, record.case_id->str());
  } else {
    out += "null";
  }
  out += ",\"kind\":";
  append_escaped(out, to_string(record.kind));
  out += ",\"payload\":{";
  bool first = true;
  for (const auto& [k, v] : record.payload) {
    if (!first) out.push_back(',');
    first = false;
    append_escaped(out, k);
    out.push_back(':');
    append_escaped(out, v);
  }
  out += "},\"tx\":\"";
  out += record.tx_id.hex();
  out += "\"}";
  return out;
}

ProvenanceRecord record_from_line(std::string_view line) {
  LineReader in(line);
  ProvenanceRecord r;
  in.expect("{\"block\":");
  r.block_number = in.u64();
  in.expect(",\"case\":");
  if (in.peek('n')) {
    in.expect("null");
  } else {
    std::string c = in.string();
    if (c.empty()) bad("empty case id");
    r.case_id = CaseId(std::move(c));
  }
  in.expect(",\"kind\":");
  auto kind = parse_record_kind(in.string());
  if (!kind) bad("unknown record kind");
  r.kind = *kind;
  in.expect(",\"payload\":{");
  if (!in.peek('}')) {
    do {
      std::string k = in.string();
      in.expect(":");
      std::string v = in.string();
      if (!r.payload.empty() && !(r.payload.rbegin()->first < k)) bad("payload keys out of canonical order");
      r.payload.emplace_hint(r.payload.end(), std::move(k), std::move(v));
    } while (in.peek(',') && (in.expect(","), true));
  }
  in.expect("},\"tx\":");
  r.tx_id = Digest::from_hex(in.string());
  in.expect("}");
  if (!in.at_end()) bad("trailing bytes after record");
  return r;
}

ojson header_to_json(const BlockHeader& h) {
  ojson j;
  j["index"] = h.index;
  j["prev_hash"] = h.prev_hash.hex();
  j["timestamp"] = h.timestamp_ms;
  j["body_root"] = h.body_root.hex();
  if (h.case_roots) {
    ojson roots = ojson::object();
    for (const auto& [c, root] : *h.case_roots) roots[c.str()] = root.hex();
    j["case_roots"] = std::move(roots);
  } else {
    j["case_roots"] = nullptr;
  }
  return j;
}

BlockHeader header_from_json(const nlohmann::json& j) {
  try {
    BlockHeader h;
    h.index = uint_field(j, "index");
    h.prev_hash = digest_field(j, "prev_hash");
    h.timestamp_ms = int_field(j, "timestamp");
    h.body_root = digest_field(j, "body_root");
    const auto& roots = field(j, "case_roots");
    if (!roots.is_null()) {
      if (!roots.is_object()) bad("case_roots must be an object");
      std::map<CaseId, Digest> m;
      for (const auto& [c, v] : roots.items()) {
        if (!v.is_string()) bad("case root must be a hex string");
        m.emplace(CaseId(c), Digest::from_hex(v.get<std::string>()));
      }
      h.case_roots = std::move(m);
    }
    return h;
  } catch (const nlohmann::json::exception& e) {
    bad(e.what());
  }
}

ojson block_to_json(const Block& block) {
  ojson txs = ojson::array();
  for (const auto& tx : block.transactions) txs.push_back(transaction_to_json(tx));
  ojson records = ojson::array();
  for (const auto& r : block.records) records.push_back(record_to_json(r));
  ojson j;
  j["header"] = header_to_json(block.header);
  j["transactions"] = std::move(txs);
  j["records"] = std::move(records);
  return j;
}

Block block_from_json(const nlohmann::json& j) {
  Block b;
  b.header = header_from_json(field(j, "header"));
  const auto& txs = field(j, "transactions");
  const auto& records = field(j, "records");
  if (!txs.is_array() || !records.is_array()) bad("transactions and records must be lists");
  for (const auto& t : txs) b.transactions.push_back(transaction_from_json(t));
  for (const auto& r : records) b.records.push_back(record_from_json(r));
  return b;
}

}  // namespace caseledger
