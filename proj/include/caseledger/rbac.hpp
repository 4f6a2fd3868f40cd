#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "caseledger/roles.hpp"
#include "caseledger/types.hpp"

namespace caseledger {

/// Rights granted per (stage, role). Cells not mentioned in a policy file are
/// empty, which the access protocol reports as "no access rights".
class PolicyMatrix {
 public:
  PolicyMatrix() = default;

  /// The shipped default: read access widens through the court stages and
  /// shrinks to read-only once the case is closed. Only law enforcement and
  /// forensic examiners can read evidence under an affidavit warrant.
  static PolicyMatrix defaults();

  /// {"<Stage>": {"<Role>": ["<Right>", ...]}, "forward_only": bool}
  /// Throws Error(InvalidPolicy) on unknown names or wrong shapes.
  static PolicyMatrix from_json(const nlohmann::json& j);
  static PolicyMatrix load(const std::string& path);
  nlohmann::ordered_json to_json() const;

  RightSet rights(Stage stage, Role role) const noexcept {
    return cells_[static_cast<std::size_t>(stage)][static_cast<std::size_t>(role)];
  }
  void set(Stage stage, Role role, RightSet rights) noexcept {
    cells_[static_cast<std::size_t>(stage)][static_cast<std::size_t>(role)] = rights;
  }

  /// When set, stage changes may only move to the next stage in order.
  bool forward_only() const noexcept { return forward_only_; }
  void set_forward_only(bool v) noexcept { forward_only_ = v; }
  bool transition_allowed(Stage from, Stage to) const noexcept;

  bool operator==(const PolicyMatrix&) const = default;

 private:
  std::array<std::array<RightSet, kAllRoles.size()>, kAllStages.size()> cells_{};
  bool forward_only_ = false;
};

/// JSON text of PolicyMatrix::defaults(), as written by `caseledger init`.
std::string default_policy_json();

struct RegistrationRecord {
  Digest fingerprint;
  Role role;
};

/// Public-key fingerprint to role; one role per key.
class UserRegistry {
 public:
  /// Throws Error(AlreadyRegistered).
  RegistrationRecord register_user(const PublicKey& key, Role role);
  std::optional<Role> role_of(const Digest& fingerprint) const;
  bool contains(const Digest& fingerprint) const { return users_.contains(fingerprint); }
  std::size_t size() const noexcept { return users_.size(); }

  /// [{"fingerprint": hex, "role": name}] in fingerprint order.
  nlohmann::ordered_json to_json() const;

  bool operator==(const UserRegistry&) const = default;

 private:
  std::map<Digest, Role> users_;
};

enum class AccessOutcome : std::uint8_t { Granted, InvalidStage, AccessDenied, NoAccessRights };

std::string_view to_string(AccessOutcome o) noexcept;

struct AccessDecision {
  AccessOutcome outcome = AccessOutcome::AccessDenied;
  RightSet rights;  // non-empty iff Granted
  std::optional<Role> role;

  bool operator==(const AccessDecision&) const = default;
};

/// The staged access protocol. Checks run in this order and the first failure
/// wins: declared stage invalid or different from `actual_stage`, sender not
/// registered, no rights for (stage, role). Otherwise the rights are returned.
AccessDecision retrieve_access_info(std::string_view declared_stage, const Digest& sender,
                                    const UserRegistry& registry, const PolicyMatrix& policy,
                                    Stage actual_stage);

/// Uses tx.declared_stage, or `actual_stage` when the transaction carries none.
AccessDecision retrieve_access_info(const Transaction& tx, const UserRegistry& registry,
                                    const PolicyMatrix& policy, Stage actual_stage);

}  // namespace caseledger
