#include "caseledger/rbac.hpp"

#include <fstream>

#include "caseledger/error.hpp"

namespace caseledger {

namespace {

constexpr const char* kDefaultPolicy =
#include "default_policy.inc"
    ;

constexpr std::string_view kForwardOnlyKey = "forward_only";

}  // namespace

std::string default_policy_json() { return kDefaultPolicy; }

PolicyMatrix PolicyMatrix::defaults() {
  static const PolicyMatrix policy = from_json(nlohmann::json::parse(kDefaultPolicy));
  return policy;
}

PolicyMatrix PolicyMatrix::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(Errc::InvalidPolicy, "policy must be a JSON object");
  PolicyMatrix policy;
  for (const auto& [stage_name, roles] : j.items()) {
    if (stage_name == kForwardOnlyKey) {
      if (!roles.is_boolean()) throw Error(Errc::InvalidPolicy, "forward_only must be a boolean");
      policy.forward_only_ = roles.get<bool>();
      continue;
    }
    auto stage = parse_stage(stage_name);
    if (!stage) throw Error(Errc::InvalidPolicy, "unknown stage '" + stage_name + "'");
    if (!roles.is_object()) throw Error(Errc::InvalidPolicy, "stage entry must map roles to rights");
    for (const auto& [role_name, rights] : roles.items()) {
      auto role = parse_role(role_name);
      if (!role) throw Error(Errc::InvalidPolicy, "unknown role '" + role_name + "'");
      if (!rights.is_array()) throw Error(Errc::InvalidPolicy, "rights must be a list");
      RightSet set;
      for (const auto& r : rights) {
        auto right = r.is_string() ? parse_right(r.get<std::string>()) : std::nullopt;
        if (!right) throw Error(Errc::InvalidPolicy, "unknown right " + r.dump());
        set.insert(*right);
      }
      policy.set(*stage, *role, set);
    }
  }
  return policy;
}

PolicyMatrix PolicyMatrix::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open policy file " + path);
  try {
    return from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidPolicy, e.what());
  }
}

nlohmann::ordered_json PolicyMatrix::to_json() const {
  nlohmann::ordered_json out;
  out[std::string(kForwardOnlyKey)] = forward_only_;
  for (auto stage : kAllStages) {
    nlohmann::ordered_json roles = nlohmann::ordered_json::object();
    for (auto role : kAllRoles) {
      nlohmann::ordered_json list = nlohmann::ordered_json::array();
      for (auto r : rights(stage, role).to_vector()) list.push_back(std::string(to_string(r)));
      roles[std::string(to_string(role))] = std::move(list);
    }
    out[std::string(to_string(stage))] = std::move(roles);
  }
  return out;
}

bool PolicyMatrix::transition_allowed(Stage from, Stage to) const noexcept {
  if (!forward_only_) return true;
  return static_cast<int>(to) == static_cast<int>(from) + 1;
}

RegistrationRecord UserRegistry::register_user(const PublicKey& key, Role role) {
  auto [it, inserted] = users_.emplace(key.fingerprint(), role);
  if (!inserted) throw Error(Errc::AlreadyRegistered, key.fingerprint().hex());
  return {key.fingerprint(), role};
}

std::optional<Role> UserRegistry::role_of(const Digest& fingerprint) const {
  auto it = users_.find(fingerprint);
  if (it == users_.end()) return std::nullopt;
  return it->second;
}

nlohmann::ordered_json UserRegistry::to_json() const {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& [fp, role] : users_)
    out.push_back({{"fingerprint", fp.hex()}, {"role", std::string(to_string(role))}});
  return out;
}

std::string_view to_string(AccessOutcome o) noexcept {
  switch (o) {
    case AccessOutcome::Granted: return "Granted";
    case AccessOutcome::InvalidStage: return "InvalidStage";
    case AccessOutcome::AccessDenied: return "AccessDenied";
    case AccessOutcome::NoAccessRights: return "NoAccessRights";
  }
  return "?";
}

AccessDecision retrieve_access_info(std::string_view declared_stage, const Digest& sender,
                                    const UserRegistry& registry, const PolicyMatrix& policy,
                                    Stage actual_stage) {
  auto declared = parse_stage(declared_stage);
  if (!declared || *declared != actual_stage) return {AccessOutcome::InvalidStage, {}, std::nullopt};

  auto role = registry.role_of(sender);
  if (!role) return {AccessOutcome::AccessDenied, {}, std::nullopt};

  RightSet rights = policy.rights(actual_stage, *role);
  if (rights.empty()) return {AccessOutcome::NoAccessRights, {}, role};
  return {AccessOutcome::Granted, rights, role};
}

AccessDecision retrieve_access_info(const Transaction& tx, const UserRegistry& registry,
                                    const PolicyMatrix& policy, Stage actual_stage) {
  std::string_view declared = tx.declared_stage ? std::string_view(*tx.declared_stage) : to_string(actual_stage);
  return retrieve_access_info(declared, tx.sender.fingerprint(), registry, policy, actual_stage);
}

}  // namespace caseledger
