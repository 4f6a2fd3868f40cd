#include <gtest/gtest.h>

#include <random>
#include <set>

#include "caseledger/merkle.hpp"
#include "caseledger/serialize.hpp"
#include "support.hpp"

using namespace caseledger;
using namespace support;

TEST(Digest, EmptyInputMatchesPublishedVector) {
  EXPECT_EQ(digest(std::string_view{}).hex(), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(digest(std::string_view("abc")).hex(),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Digest, HexRoundTripIsStrict) {
  Digest d = digest(std::string_view("x"));
  EXPECT_EQ(Digest::from_hex(d.hex()), d);
  std::string upper = d.hex();
  for (auto& c : upper) c = static_cast<char>(std::toupper(c));
  EXPECT_THROW(Digest::from_hex(upper), Error);
  EXPECT_THROW(Digest::from_hex(d.hex().substr(1)), Error);
  EXPECT_TRUE(Digest::zero().is_zero());
}

TEST(Digest, RandomInputsAgreeWithOracleAndDoNotCollide) {
  std::mt19937_64 rng(7);
  std::set<Digest> seen;
  for (int i = 0; i < 10000; ++i) {
    Bytes b(rng() % 64);
    for (auto& x : b) x = static_cast<std::uint8_t>(rng());
    put_u64(b, static_cast<std::uint64_t>(i));
    Digest d = digest(ByteView(b));
    if (i < 200) EXPECT_EQ(d, sha256(b));
    EXPECT_EQ(d, digest(ByteView(b)));
    seen.insert(d);
  }
  EXPECT_EQ(seen.size(), 10000u);
}

TEST(Serialize, SetupTransactionMatchesDocumentedLayout) {
  KeyPair admin = key(0);
  KeyPair subject = key(1);
  Transaction tx = setup_tx(admin, subject.public_key, Role::Investigator, 1'700'000'000'123);

  Bytes expected;
  put_u8(expected, 0);  // Setup
  put_u8(expected, 0);  // no case
  put_lp(expected, admin.public_key.bytes());
  put_u64(expected, 1'700'000'000'123ULL);
  put_u8(expected, 0);  // no declared stage
  put_lp(expected, subject.public_key.bytes());
  put_u8(expected, 1);  // Investigator
  EXPECT_EQ(canonical_serialize(tx), expected);

  Bytes tagged{0x02};
  put_raw(tagged, expected);
  EXPECT_EQ(tx.id, sha256(tagged));
}

TEST(Serialize, AccessRequestLayout) {
  KeyPair k = key(3);
  Transaction tx = access_request(k, "C-7", "ReadEvidence", "Analysis", 42);
  Bytes expected;
  put_u8(expected, 4);
  put_u8(expected, 1);
  put_lp(expected, std::string("C-7"));
  put_lp(expected, k.public_key.bytes());
  put_u64(expected, 42);
  put_u8(expected, 1);
  put_lp(expected, std::string("Analysis"));
  put_lp(expected, std::string("ReadEvidence"));
  EXPECT_EQ(canonical_serialize(tx), expected);
}

TEST(Serialize, DeterministicAndInjectiveOnTimestamp) {
  KeyPair k = key(2);
  auto a = file_upload(k, "C1", "f", 10);
  auto b = file_upload(k, "C1", "f", 10);
  auto c = file_upload(k, "C1", "f", 11);
  EXPECT_EQ(canonical_serialize(a), canonical_serialize(b));
  EXPECT_NE(canonical_serialize(a), canonical_serialize(c));
  EXPECT_NE(a.id, c.id);
}

TEST(Serialize, IncompleteTransactionsAreRejected) {
  KeyPair k = key(2);
  Transaction tx;
  tx.sender = k.public_key;
  tx.payload = FileUploadPayload{"f", digest(std::string_view("f"))};
  EXPECT_THROW(canonical_serialize(tx), Error);  // no case

  tx.case_id = CaseId("C1");
  tx.payload = AnalysisPayload{};
  EXPECT_THROW(canonical_serialize(tx), Error);

  tx.payload = AccessRequestPayload{"ReadEvidence"};
  EXPECT_THROW(canonical_serialize(tx), Error);  // no declared stage

  tx.payload = FileUploadPayload{"\xff\xfe", Digest{}};
  try {
    canonical_serialize(tx);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::InvalidEncoding);
  }

  EXPECT_THROW(CaseId(""), Error);
}

TEST(Serialize, Utf8Validation) {
  EXPECT_TRUE(valid_utf8("plain"));
  EXPECT_TRUE(valid_utf8("caf\xc3\xa9 \xf0\x9f\x94\x8d"));
  EXPECT_FALSE(valid_utf8("\xc0\xaf"));          // overlong
  EXPECT_FALSE(valid_utf8("\xed\xa0\x80"));      // surrogate
  EXPECT_FALSE(valid_utf8("\xf4\x90\x80\x80"));  // beyond U+10FFFF
  EXPECT_FALSE(valid_utf8("\xe2\x82"));          // truncated
}

TEST(Merkle, SmallTreesMatchHandBuiltOracle) {
  Digest d1 = digest(std::string_view("1"));
  Digest d2 = digest(std::string_view("2"));
  Digest d3 = digest(std::string_view("3"));
  std::vector<Digest> one{d1};
  std::vector<Digest> two{d1, d2};
  std::vector<Digest> three{d1, d2, d3};
  EXPECT_EQ(merkle_root(one), oracle_leaf(d1));
  EXPECT_EQ(merkle_root(two), oracle_node(oracle_leaf(d1), oracle_leaf(d2)));
  Digest l3 = oracle_leaf(d3);
  EXPECT_EQ(merkle_root(three), oracle_node(oracle_node(oracle_leaf(d1), oracle_leaf(d2)), oracle_node(l3, l3)));
}

TEST(Merkle, EmptyInputThrows) {
  std::vector<Digest> none;
  try {
    merkle_root(none);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::EmptyLeaves);
  }
}

TEST(Merkle, RandomListsMatchOracleAndDetectPerturbation) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<Digest> leaves(1 + rng() % 64);
    for (auto& l : leaves) l = digest(std::to_string(rng()));
    Digest root = merkle_root(leaves);
    if (trial < 100) EXPECT_EQ(root, oracle_root(leaves));
    auto changed = leaves;
    changed[rng() % changed.size()].bytes[rng() % 32] ^= static_cast<std::uint8_t>(1 + rng() % 255);
    EXPECT_NE(merkle_root(changed), root);
  }
}

TEST(Merkle, CaseRootChaining) {
  Digest t = digest(std::string_view("t"));
  Bytes b{0x04};
  put_digest(b, Digest::zero());
  put_digest(b, t);
  EXPECT_EQ(chain_case_root(Digest::zero(), t), sha256(b));
}
