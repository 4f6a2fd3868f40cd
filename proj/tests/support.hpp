#pragma once

#include <openssl/sha.h>

#include <string>
#include <vector>

#include "caseledger/contracts.hpp"
#include "caseledger/error.hpp"
#include "caseledger/serialize.hpp"
#include "caseledger/types.hpp"
#include "caseledger/workload.hpp"

namespace support {

using namespace caseledger;

// Independent SHA-256 used as the hashing oracle.
inline Digest sha256(const Bytes& data) {
  Digest d;
  SHA256(data.data(), data.size(), d.bytes.data());
  return d;
}

// Straight-line encoders for the documented byte layouts.
inline void put_u8(Bytes& b, std::uint8_t v) { b.push_back(v); }
inline void put_u32(Bytes& b, std::uint32_t v) {
  for (int s = 24; s >= 0; s -= 8) b.push_back(static_cast<std::uint8_t>(v >> s));
}
inline void put_u64(Bytes& b, std::uint64_t v) {
  for (int s = 56; s >= 0; s -= 8) b.push_back(static_cast<std::uint8_t>(v >> s));
}
inline void put_raw(Bytes& b, const Bytes& v) { b.insert(b.end(), v.begin(), v.end()); }
inline void put_digest(Bytes& b, const Digest& d) { b.insert(b.end(), d.bytes.begin(), d.bytes.end()); }
inline void put_lp(Bytes& b, const std::string& s) {
  put_u32(b, static_cast<std::uint32_t>(s.size()));
  b.insert(b.end(), s.begin(), s.end());
}
inline void put_lp(Bytes& b, const Bytes& v) {
  put_u32(b, static_cast<std::uint32_t>(v.size()));
  put_raw(b, v);
}

inline Digest oracle_leaf(const Digest& d) {
  Bytes b{0x00};
  put_digest(b, d);
  return sha256(b);
}

inline Digest oracle_node(const Digest& l, const Digest& r) {
  Bytes b{0x01};
  put_digest(b, l);
  put_digest(b, r);
  return sha256(b);
}

inline Digest oracle_root(std::vector<Digest> level) {
  for (auto& d : level) d = oracle_leaf(d);
  while (level.size() > 1) {
    if (level.size() % 2 == 1) level.push_back(level.back());
    std::vector<Digest> next;
    for (std::size_t i = 0; i < level.size(); i += 2) next.push_back(oracle_node(level[i], level[i + 1]));
    level = std::move(next);
  }
  return level.front();
}

inline Digest oracle_chain(const Digest& prev, const Digest& t) {
  Bytes b{0x04};
  put_digest(b, prev);
  put_digest(b, t);
  return sha256(b);
}

inline Bytes oracle_record_bytes(const ProvenanceRecord& r) {
  Bytes b;
  put_u8(b, static_cast<std::uint8_t>(r.kind));
  put_u8(b, r.case_id ? 1 : 0);
  if (r.case_id) put_lp(b, r.case_id->str());
  put_u64(b, r.block_number);
  put_digest(b, r.tx_id);
  put_u32(b, static_cast<std::uint32_t>(r.payload.size()));
  for (const auto& [k, v] : r.payload) {
    put_lp(b, k);
    put_lp(b, v);
  }
  return b;
}

// Per-block case root: one leaf per run of consecutive records sharing a tx.
inline Digest oracle_block_case_root(const std::vector<ProvenanceRecord>& case_records) {
  std::vector<Digest> leaves;
  std::size_t i = 0;
  while (i < case_records.size()) {
    std::size_t j = i;
    while (j < case_records.size() && case_records[j].tx_id == case_records[i].tx_id) ++j;
    Bytes b{0x05};
    put_digest(b, case_records[i].tx_id);
    put_u32(b, static_cast<std::uint32_t>(j - i));
    for (std::size_t k = i; k < j; ++k) put_lp(b, oracle_record_bytes(case_records[k]));
    leaves.push_back(sha256(b));
    i = j;
  }
  return oracle_root(leaves);
}

inline KeyPair key(std::uint64_t i) { return derive_workload_key(4242, i); }

inline Transaction setup_tx(const KeyPair& admin, const PublicKey& subject, Role role, std::int64_t t) {
  Transaction tx;
  tx.sender = admin.public_key;
  tx.timestamp_ms = t;
  tx.payload = SetupPayload{subject, role};
  return finalize(std::move(tx));
}

inline Transaction case_tx(const KeyPair& sender, const std::string& case_id, std::int64_t t, Payload payload,
                           std::optional<std::string> declared = std::nullopt) {
  Transaction tx;
  tx.case_id = CaseId(case_id);
  tx.sender = sender.public_key;
  tx.timestamp_ms = t;
  tx.declared_stage = std::move(declared);
  tx.payload = std::move(payload);
  return finalize(std::move(tx));
}

inline Transaction initial_upload(const KeyPair& s, const std::string& c, Stage stage, const std::string& file,
                                  std::int64_t t) {
  return case_tx(s, c, t, InitialUploadPayload{file, digest(file), stage});
}
inline Transaction file_upload(const KeyPair& s, const std::string& c, const std::string& file, std::int64_t t) {
  return case_tx(s, c, t, FileUploadPayload{file, digest(file)});
}
inline Transaction analysis(const KeyPair& s, const std::string& c, std::vector<Digest> parents, std::int64_t t) {
  return case_tx(s, c, t, AnalysisPayload{std::move(parents)});
}
inline Transaction access_request(const KeyPair& s, const std::string& c, const std::string& resource,
                                  const std::string& declared, std::int64_t t) {
  return case_tx(s, c, t, AccessRequestPayload{resource}, declared);
}
inline Transaction stage_tx(const KeyPair& s, const std::string& c, Stage target, std::int64_t t) {
  return case_tx(s, c, t, StagePayload{target});
}
inline Transaction provenance_tx(const KeyPair& s, const std::string& c, std::int64_t t) {
  return case_tx(s, c, t, ProvenancePayload{});
}

// An admin plus one registered user per role.
struct Cast {
  KeyPair admin = key(0);
  KeyPair examiner = key(1);
  KeyPair investigator = key(2);
  KeyPair counsel = key(3);
  KeyPair officer = key(4);
  KeyPair stranger = key(5);

  std::vector<Transaction> setups(std::int64_t t = 1) const {
    return {setup_tx(admin, examiner.public_key, Role::DigitalForensicsExaminer, t),
            setup_tx(admin, investigator.public_key, Role::Investigator, t + 1),
            setup_tx(admin, counsel.public_key, Role::LegalCounsel, t + 2),
            setup_tx(admin, officer.public_key, Role::LawEnforcement, t + 3)};
  }

  ContractState genesis() const {
    ContractState s;
    s.access.admins.insert(admin.public_key.fingerprint());
    return s;
  }

  ContractState registered() const {
    ContractState s = genesis();
    for (const auto& tx : setups()) apply_transaction(s, tx, 0);
    return s;
  }
};

}  // namespace support
