#include "caseledger/record_store.hpp"

#include <fstream>

#include "caseledger/json_codec.hpp"
#include "caseledger/merkle.hpp"

namespace caseledger {

std::string_view to_string(Verdict v) noexcept { return v == Verdict::Verified ? "Verified" : "Compromised"; }

namespace {

struct BlockGroup {
  std::uint64_t block = 0;
  std::vector<const ProvenanceRecord*> records;
};

struct Decoded {
  std::vector<ProvenanceRecord> records;
  std::optional<std::size_t> corrupt_line;
};

Decoded decode_lines(const CaseId& case_id, const std::vector<std::string>& lines) {
  Decoded out;
  out.records.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    try {
      ProvenanceRecord r = record_from_line(lines[i]);
      bool misfiled = !r.case_id || *r.case_id != case_id;
      bool descending = !out.records.empty() && r.block_number < out.records.back().block_number;
      if (misfiled || descending) {
        out.corrupt_line = i;
        break;
      }
      out.records.push_back(std::move(r));
    } catch (const Error&) {
      out.corrupt_line = i;
      break;
    }
  }
  return out;
}

VerificationReport verify_decoded(const CaseId& case_id, const Decoded& decoded, const Digest& chain_root,
                                  std::span<const CaseRootEntry> history) {
  std::vector<BlockGroup> groups;
  for (const auto& r : decoded.records) {
    if (groups.empty() || groups.back().block != r.block_number) groups.push_back({r.block_number, {}});
    groups.back().records.push_back(&r);
  }
  // The group interrupted by a corrupt line may be incomplete.
  if (decoded.corrupt_line && !groups.empty()) groups.pop_back();

  std::vector<Digest> prefixes;
  prefixes.reserve(groups.size());
  Digest root;
  for (const auto& g : groups) {
    root = chain_case_root(root, merkle_root(case_leaves(g.records)));
    prefixes.push_back(root);
  }

  VerificationReport report;
  report.case_id = case_id;
  report.recomputed_root = root;
  report.stored_root = chain_root;
  report.corrupt_line = decoded.corrupt_line;
  report.verdict = (!decoded.corrupt_line && root == chain_root) ? Verdict::Verified : Verdict::Compromised;
  if (report.verdict == Verdict::Verified || history.empty()) return report;

  auto matches = [&](std::size_t i) {
    return i < groups.size() && i < history.size() && groups[i].block == history[i].block &&
           prefixes[i] == history[i].root;
  };
  std::size_t lo = 0;
  std::size_t hi = std::max(groups.size(), history.size());
  while (lo < hi) {
    std::size_t mid = lo + (hi - lo) / 2;
    if (matches(mid)) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (lo < history.size()) {
    report.first_divergent_block = history[lo].block;
  } else if (lo < groups.size()) {
    report.first_divergent_block = groups[lo].block;
  }
  return report;
}

bool safe_file_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' || c == '_' ||
         c == '.';
}

}  // namespace

void RecordStore::append_block_records(const CaseId& case_id, std::uint64_t block_number,
                                       std::span<const ProvenanceRecord> records, const Digest& case_root) {
  std::unique_lock lock(mutex_);
  auto it = cases_.find(case_id);
  if (it != cases_.end() && block_number <= it->second.last_block)
    throw Error(Errc::OutOfOrderBlock, case_id.str() + " already has block " + std::to_string(it->second.last_block));
  CaseFile& file = cases_[case_id];
  for (const auto& r : records) file.lines.push_back(record_to_line(r));
  file.last_block = block_number;
  file.stored_root = case_root;
}

bool RecordStore::has_case(const CaseId& case_id) const {
  std::shared_lock lock(mutex_);
  return cases_.contains(case_id);
}

std::vector<CaseId> RecordStore::cases() const {
  std::shared_lock lock(mutex_);
  std::vector<CaseId> out;
  for (const auto& [c, _] : cases_) out.push_back(c);
  return out;
}

std::optional<Digest> RecordStore::stored_root(const CaseId& case_id) const {
  std::shared_lock lock(mutex_);
  auto it = cases_.find(case_id);
  if (it == cases_.end()) return std::nullopt;
  return it->second.stored_root;
}

std::optional<std::uint64_t> RecordStore::last_block(const CaseId& case_id) const {
  std::shared_lock lock(mutex_);
  auto it = cases_.find(case_id);
  if (it == cases_.end()) return std::nullopt;
  return it->second.last_block;
}

const RecordStore::CaseFile& RecordStore::file_locked(const CaseId& case_id) const {
  auto it = cases_.find(case_id);
  if (it == cases_.end()) throw Error(Errc::UnknownCase, case_id.str());
  return it->second;
}

std::vector<ProvenanceRecord> RecordStore::fetch_case_records(const CaseId& case_id) const {
  std::shared_lock lock(mutex_);
  Decoded d = decode_lines(case_id, file_locked(case_id).lines);
  if (d.corrupt_line)
    throw Error(Errc::InvalidEncoding, case_id.str() + ": corrupt record at line " + std::to_string(*d.corrupt_line));
  return std::move(d.records);
}

VerificationReport RecordStore::verify_case_records(const CaseId& case_id, const Digest& chain_root,
                                                    std::span<const CaseRootEntry> history) const {
  std::shared_lock lock(mutex_);
  Decoded d = decode_lines(case_id, file_locked(case_id).lines);
  return verify_decoded(case_id, d, chain_root, history);
}

CaseRecords RecordStore::fetch_verified(const CaseId& case_id, const Digest& chain_root,
                                        std::span<const CaseRootEntry> history) const {
  std::shared_lock lock(mutex_);
  Decoded d = decode_lines(case_id, file_locked(case_id).lines);
  auto report = verify_decoded(case_id, d, chain_root, history);
  return {std::move(d.records), std::move(report)};
}

std::vector<std::string> RecordStore::case_lines(const CaseId& case_id) const {
  std::shared_lock lock(mutex_);
  return file_locked(case_id).lines;
}

void RecordStore::replace_case_lines(const CaseId& case_id, std::vector<std::string> lines) {
  std::unique_lock lock(mutex_);
  auto it = cases_.find(case_id);
  if (it == cases_.end()) throw Error(Errc::UnknownCase, case_id.str());
  it->second.lines = std::move(lines);
}

std::string RecordStore::case_file_name(const CaseId& case_id) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (std::size_t i = 0; i < case_id.str().size(); ++i) {
    char c = case_id.str()[i];
    if (safe_file_char(c) && !(i == 0 && c == '.')) {
      out.push_back(c);
    } else {
      auto b = static_cast<unsigned char>(c);
      out.push_back('%');
      out.push_back(kHex[b >> 4]);
      out.push_back(kHex[b & 0x0f]);
    }
  }
  return out + ".jsonl";
}

void RecordStore::save(const std::filesystem::path& dir) const {
  std::shared_lock lock(mutex_);
  std::filesystem::create_directories(dir);
  ojson index = ojson::object();
  for (const auto& [case_id, file] : cases_) {
    auto name = case_file_name(case_id);
    std::ofstream out(dir / name, std::ios::trunc | std::ios::binary);
    if (!out) throw Error(Errc::Io, "cannot write " + (dir / name).string());
    for (const auto& line : file.lines) out << line << '\n';
    index[case_id.str()] = {{"file", name}, {"last_block", file.last_block}, {"stored_root", file.stored_root.hex()}};
  }
  std::ofstream out(dir / "index.json", std::ios::trunc);
  if (!out) throw Error(Errc::Io, "cannot write index.json");
  out << index.dump(2) << '\n';
}

std::unique_ptr<RecordStore> RecordStore::load(const std::filesystem::path& dir) {
  auto store = std::make_unique<RecordStore>();
  std::ifstream idx(dir / "index.json");
  if (!idx) return store;
  nlohmann::json index;
  try {
    index = nlohmann::json::parse(idx);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidEncoding, std::string("store index: ") + e.what());
  }
  for (const auto& [case_name, entry] : index.items()) {
    CaseId case_id(case_name);
    CaseFile file;
    try {
      file.last_block = entry.at("last_block").get<std::uint64_t>();
      file.stored_root = Digest::from_hex(entry.at("stored_root").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::InvalidEncoding, std::string("store index: ") + e.what());
    }
    std::ifstream in(dir / case_file_name(case_id), std::ios::binary);
    std::string line;
    while (std::getline(in, line)) file.lines.push_back(line);
    store->cases_.emplace(std::move(case_id), std::move(file));
  }
  return store;
}

bool RecordStore::same_contents(const RecordStore& other) const {
  std::shared_lock a(mutex_);
  std::shared_lock b(other.mutex_);
  return cases_ == other.cases_;
}

}  // namespace caseledger
