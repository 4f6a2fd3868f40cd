#include <gtest/gtest.h>

#include "caseledger/rbac.hpp"
#include "support.hpp"

using namespace caseledger;
using namespace support;

TEST(Policy, DefaultHonoursAffidavitRule) {
  auto p = PolicyMatrix::defaults();
  auto reads = [&](Role r) { return p.rights(Stage::AffidavitWarrant, r).contains(Right::ReadEvidence); };
  EXPECT_TRUE(reads(Role::LawEnforcement));
  EXPECT_TRUE(reads(Role::DigitalForensicsExaminer));
  EXPECT_FALSE(reads(Role::Investigator));
  EXPECT_FALSE(reads(Role::LegalCounsel));
  for (auto stage : kAllStages) {
    EXPECT_TRUE(p.rights(stage, Role::LawEnforcement).contains(Right::ChangeStage));
    EXPECT_TRUE(p.rights(stage, Role::LegalCounsel).contains(Right::ChangeStage));
  }
}

TEST(Policy, JsonRoundTripAndValidation) {
  auto p = PolicyMatrix::defaults();
  EXPECT_EQ(PolicyMatrix::from_json(nlohmann::json::parse(p.to_json().dump())), p);
  EXPECT_EQ(PolicyMatrix::from_json(nlohmann::json::parse(default_policy_json())), p);

  auto sparse = PolicyMatrix::from_json(nlohmann::json::parse(R"({"Analysis": {"Investigator": ["ReadEvidence"]}})"));
  EXPECT_TRUE(sparse.rights(Stage::Analysis, Role::Investigator).contains(Right::ReadEvidence));
  EXPECT_TRUE(sparse.rights(Stage::CaseClosed, Role::LawEnforcement).empty());

  for (const char* bad : {R"({"Trial": {}})", R"({"Analysis": {"Judge": []}})",
                          R"({"Analysis": {"Investigator": ["Fly"]}})", R"({"Analysis": []})", "[]",
                          R"({"forward_only": "yes"})"}) {
    try {
      PolicyMatrix::from_json(nlohmann::json::parse(bad));
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::InvalidPolicy) << bad;
    }
  }
}

TEST(Policy, ForwardOnlyTransitions) {
  auto p = PolicyMatrix::defaults();
  EXPECT_TRUE(p.transition_allowed(Stage::Analysis, Stage::AffidavitWarrant));
  p.set_forward_only(true);
  EXPECT_TRUE(p.transition_allowed(Stage::Analysis, Stage::PresentedInCourt));
  EXPECT_FALSE(p.transition_allowed(Stage::Analysis, Stage::CaseClosed));
  EXPECT_FALSE(p.transition_allowed(Stage::Analysis, Stage::Investigation));
}

TEST(Registry, RegisterAndLookup) {
  UserRegistry r;
  KeyPair k = key(9);
  auto rec = r.register_user(k.public_key, Role::Investigator);
  EXPECT_EQ(rec.fingerprint, k.public_key.fingerprint());
  EXPECT_EQ(r.role_of(k.public_key.fingerprint()), Role::Investigator);
  try {
    r.register_user(k.public_key, Role::LawEnforcement);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::AlreadyRegistered);
  }
  auto j = r.to_json();
  ASSERT_EQ(j.size(), 1u);
  EXPECT_EQ(j[0]["role"], "Investigator");
}

TEST(AccessProtocol, OutcomesInOrder) {
  auto policy = PolicyMatrix::defaults();
  UserRegistry reg;
  KeyPair inv = key(1);
  KeyPair le = key(2);
  KeyPair nobody = key(3);
  reg.register_user(inv.public_key, Role::Investigator);
  reg.register_user(le.public_key, Role::LawEnforcement);
  const auto A = Stage::AffidavitWarrant;

  EXPECT_EQ(retrieve_access_info("Trial", le.public_key.fingerprint(), reg, policy, A).outcome,
            AccessOutcome::InvalidStage);
  EXPECT_EQ(retrieve_access_info("Analysis", le.public_key.fingerprint(), reg, policy, A).outcome,
            AccessOutcome::InvalidStage);
  // Stage mismatch dominates even for unknown senders.
  EXPECT_EQ(retrieve_access_info("Analysis", nobody.public_key.fingerprint(), reg, policy, A).outcome,
            AccessOutcome::InvalidStage);
  EXPECT_EQ(retrieve_access_info("AffidavitWarrant", nobody.public_key.fingerprint(), reg, policy, A).outcome,
            AccessOutcome::AccessDenied);
  EXPECT_EQ(retrieve_access_info("AffidavitWarrant", inv.public_key.fingerprint(), reg, policy, A).outcome,
            AccessOutcome::NoAccessRights);
  auto granted = retrieve_access_info("AffidavitWarrant", le.public_key.fingerprint(), reg, policy, A);
  EXPECT_EQ(granted.outcome, AccessOutcome::Granted);
  EXPECT_TRUE(granted.rights.contains(Right::ReadEvidence));
  EXPECT_EQ(granted.role, Role::LawEnforcement);

  auto tx = access_request(inv, "C1", "ReadEvidence", "Investigation", 1);
  auto d = retrieve_access_info(tx, reg, policy, Stage::Investigation);
  EXPECT_EQ(d.outcome, AccessOutcome::Granted);
  EXPECT_TRUE(d.rights.contains(Right::ReadEvidence));
}

TEST(AccessProtocol, OtherStagesDoNotInfluenceOutcome) {
  UserRegistry reg;
  KeyPair inv = key(1);
  reg.register_user(inv.public_key, Role::Investigator);
  auto base = PolicyMatrix::defaults();
  auto changed = base;
  for (auto s : kAllStages)
    if (s != Stage::Analysis)
      for (auto r : kAllRoles) changed.set(s, r, {});
  EXPECT_EQ(retrieve_access_info("Analysis", inv.public_key.fingerprint(), reg, base, Stage::Analysis),
            retrieve_access_info("Analysis", inv.public_key.fingerprint(), reg, changed, Stage::Analysis));
}
