#include "caseledger/serialize.hpp"

#include "caseledger/bytes.hpp"
#include "caseledger/error.hpp"

namespace caseledger {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw Error(Errc::MissingField, what);
}

void require_text(std::string_view s, const char* what) {
  if (!valid_utf8(s)) throw Error(Errc::InvalidEncoding, std::string(what) + " is not valid UTF-8");
}

struct PayloadWriter {
  ByteWriter& w;

  void operator()(const SetupPayload& p) const {
    require(!p.subject.bytes().empty(), "Setup requires a subject key");
    w.prefixed(ByteView(p.subject.bytes())).u8(static_cast<std::uint8_t>(p.role));
  }
  void operator()(const InitialUploadPayload& p) const {
    require(!p.file_id.empty(), "InitialUpload requires a file id");
    require_text(p.file_id, "file id");
    w.prefixed(p.file_id).digest(p.content).u8(static_cast<std::uint8_t>(p.stage));
  }
  void operator()(const FileUploadPayload& p) const {
    require(!p.file_id.empty(), "FileUpload requires a file id");
    require_text(p.file_id, "file id");
    w.prefixed(p.file_id).digest(p.content);
  }
  void operator()(const AnalysisPayload& p) const {
    require(!p.parents.empty(), "Analysis requires at least one parent token");
    w.u32(static_cast<std::uint32_t>(p.parents.size()));
    for (const auto& parent : p.parents) w.digest(parent);
  }
  void operator()(const AccessRequestPayload& p) const {
    require(!p.resource.empty(), "AccReq requires a resource");
    require_text(p.resource, "resource");
    w.prefixed(p.resource);
  }
  void operator()(const StagePayload& p) const { w.u8(static_cast<std::uint8_t>(p.target)); }
  void operator()(const ProvenancePayload&) const {}
};

}  // namespace

bool valid_utf8(std::string_view s) noexcept {
  std::size_t i = 0;
  while (i < s.size()) {
    auto c = static_cast<unsigned char>(s[i]);
    if (c < 0x80) {
      ++i;
      continue;
    }
    std::size_t len = 0;
    std::uint32_t cp = 0;
    std::uint32_t min = 0;
    if ((c & 0xE0) == 0xC0) {
      len = 2, cp = c & 0x1F, min = 0x80;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3, cp = c & 0x0F, min = 0x800;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4, cp = c & 0x07, min = 0x10000;
    } else {
      return false;
    }
    if (i + len > s.size()) return false;
    for (std::size_t k = 1; k < len; ++k) {
      auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
    i += len;
  }
  return true;
}

Bytes canonical_serialize(const Transaction& tx) {
  const auto kind = tx.kind();
  require(!tx.sender.bytes().empty(), "sender public key");
  if (kind == TransactionKind::Setup) {
    require(!tx.case_id.has_value(), "Setup transactions carry no case");
  } else {
    require(tx.case_id.has_value(), "case id");
  }
  if (kind == TransactionKind::AccReq) require(tx.declared_stage.has_value(), "AccReq requires current_stage");
  if (tx.case_id) require_text(tx.case_id->str(), "case id");
  if (tx.declared_stage) require_text(*tx.declared_stage, "declared stage");

  ByteWriter w;
  w.u8(static_cast<std::uint8_t>(kind));
  w.u8(tx.case_id ? 1 : 0);
  if (tx.case_id) w.prefixed(tx.case_id->str());
  w.prefixed(ByteView(tx.sender.bytes()));
  w.i64(tx.timestamp_ms);
  w.u8(tx.declared_stage ? 1 : 0);
  if (tx.declared_stage) w.prefixed(*tx.declared_stage);
  std::visit(PayloadWriter{w}, tx.payload);
  return std::move(w).take();
}

Digest transaction_id(const Transaction& tx) {
  auto bytes = canonical_serialize(tx);
  return Hasher(tag::kTransaction).update(ByteView(bytes)).finish();
}

Bytes record_bytes(const ProvenanceRecord& record) {
  ByteWriter w;
  w.u8(static_cast<std::uint8_t>(record.kind));
  w.u8(record.case_id ? 1 : 0);
  if (record.case_id) w.prefixed(record.case_id->str());
  w.u64(record.block_number);
  w.digest(record.tx_id);
  w.u32(static_cast<std::uint32_t>(record.payload.size()));
  for (const auto& [key, value] : record.payload) w.prefixed(key).prefixed(value);
  return std::move(w).take();
}

Digest record_commitment(const Digest& tx_id, std::span<const ProvenanceRecord* const> records) {
  Hasher h(tag::kRecordCommit);
  h.update(tx_id);
  h.update_u32(static_cast<std::uint32_t>(records.size()));
  for (const auto* record : records) {
    auto bytes = record_bytes(*record);
    h.update_prefixed(ByteView(bytes));
  }
  return h.finish();
}

Digest header_digest(const BlockHeader& header) {
  Hasher h(tag::kBlockHeader);
  h.update_u64(header.index);
  h.update(header.prev_hash);
  h.update_u64(static_cast<std::uint64_t>(header.timestamp_ms));
  h.update(header.body_root);
  h.update_byte(header.case_roots ? 1 : 0);
  if (header.case_roots) {
    h.update_u32(static_cast<std::uint32_t>(header.case_roots->size()));
    for (const auto& [case_id, root] : *header.case_roots) {
      h.update_prefixed(case_id.str());
      h.update(root);
    }
  }
  return h.finish();
}

}  // namespace caseledger
