#include <gtest/gtest.h>

#include <random>

#include "caseledger/bench.hpp"
#include "caseledger/json_codec.hpp"
#include "caseledger/serialize.hpp"
#include "support.hpp"

using namespace caseledger;
using namespace support;

namespace {

// Reference behaviour: nlohmann parse, decode, re-dump, compare.
std::optional<ProvenanceRecord> reference_decode(const std::string& line) {
  try {
    auto r = record_from_json(nlohmann::json::parse(line));
    if (record_to_json(r).dump() != line) return std::nullopt;
    return r;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::optional<ProvenanceRecord> fast_decode(const std::string& line) {
  try {
    return record_from_line(line);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::InvalidEncoding);
    return std::nullopt;
  }
}

std::string random_text(std::mt19937_64& rng) {
  static const std::vector<std::string> pieces{"a", "Z", "0", " ", "\"", "\\", "/", "\n", "\t", "\x01", "\x1f",
                                               "\x7f", "\xc3\xa9", "\xe2\x82\xac", "\xf0\x9f\x94\x8d", "{", ":"};
  std::string s;
  std::size_t n = 1 + rng() % 8;
  for (std::size_t i = 0; i < n; ++i) s += pieces[rng() % pieces.size()];
  return s;
}

}  // namespace

TEST(RecordLine, EncoderMatchesReferenceSerializer) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 2000; ++i) {
    ProvenanceRecord r;
    r.kind = static_cast<RecordKind>(rng() % 11);
    if (rng() % 5) r.case_id = CaseId(random_text(rng));
    r.block_number = rng() % 3 == 0 ? rng() : rng() % 100;
    r.tx_id = digest(std::to_string(rng()));
    std::size_t n = rng() % 5;
    for (std::size_t k = 0; k < n; ++k) r.payload[random_text(rng)] = random_text(rng);
    std::string line = record_to_line(r);
    ASSERT_EQ(line, record_to_json(r).dump());
    EXPECT_EQ(record_from_line(line), r);
  }
}

TEST(RecordLine, DecoderAgreesWithReferenceOnMutations) {
  WorkloadSpec spec;
  spec.num_blocks = 20;
  spec.num_cases = 4;
  Fixture f = build_fixture(spec);
  std::vector<std::string> lines;
  for (const auto& c : f.store->cases())
    for (auto& l : f.store->case_lines(c)) lines.push_back(l);

  std::mt19937_64 rng(17);
  const std::string alphabet = "{}[]:,\"\\ 0123456789abcdefnultrueABCu\x01\xc3\xa9";
  for (int i = 0; i < 20000; ++i) {
    std::string line = lines[rng() % lines.size()];
    int edits = 1 + static_cast<int>(rng() % 2);
    for (int e = 0; e < edits; ++e) {
      std::size_t pos = rng() % line.size();
      switch (rng() % 3) {
        case 0: line[pos] = alphabet[rng() % alphabet.size()]; break;
        case 1: line.erase(pos, 1); break;
        default: line.insert(pos, 1, alphabet[rng() % alphabet.size()]); break;
      }
    }
    auto ref = reference_decode(line);
    auto fast = fast_decode(line);
    ASSERT_EQ(ref.has_value(), fast.has_value()) << line;
    if (ref) EXPECT_EQ(*ref, *fast);
  }
}

TEST(RecordLine, RejectsNonCanonicalForms) {
  ProvenanceRecord r{RecordKind::StageChange, CaseId("C1"), 7, digest(std::string_view("t")),
                     {{"from", "A"}, {"to", "B"}}};
  std::string line = record_to_line(r);
  EXPECT_EQ(record_from_line(line), r);
  auto rejects = [](const std::string& s) {
    try {
      record_from_line(s);
      return false;
    } catch (const Error& e) {
      return e.code() == Errc::InvalidEncoding;
    }
  };
  std::string spaced = line;
  spaced.insert(1, " ");
  EXPECT_TRUE(rejects(spaced));
  std::string reordered = line;
  reordered.replace(reordered.find("\"from\":\"A\",\"to\":\"B\""), 19, "\"to\":\"B\",\"from\":\"A\"");
  EXPECT_TRUE(rejects(reordered));
  std::string padded = line;
  padded.replace(padded.find(":7,"), 3, ":07,");
  EXPECT_TRUE(rejects(padded));
  std::string upper = line;
  auto hex = upper.find_first_of("abcdef", upper.find("\"tx\":\"") + 6);
  upper[hex] = static_cast<char>(std::toupper(upper[hex]));
  EXPECT_TRUE(rejects(upper));
  std::string escaped = line;
  escaped.replace(escaped.find("\"A\""), 3, "\"\\u0041\"");
  EXPECT_TRUE(rejects(escaped));
  EXPECT_TRUE(rejects(line + "\n"));
}

TEST(JsonCodec, TransactionsRoundTrip) {
  WorkloadSpec spec;
  spec.num_blocks = 10;
  spec.num_cases = 3;
  Workload w = generate_workload(spec);
  for (const auto& tx : w.transactions) {
    auto j = nlohmann::json::parse(transaction_to_json(tx).dump());
    EXPECT_EQ(transaction_from_json(j), tx);
  }
  auto j = transaction_to_json(w.transactions.front());
  j["timestamp"] = j["timestamp"].get<std::int64_t>() + 1;
  // The decoder keeps the stored id; the ledger is what rejects stale ids.
  auto stale = transaction_from_json(nlohmann::json::parse(j.dump()));
  EXPECT_NE(stale.id, transaction_id(stale));
}
