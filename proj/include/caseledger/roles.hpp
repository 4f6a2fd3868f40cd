#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace caseledger {

enum class Role : std::uint8_t {
  DigitalForensicsExaminer,
  Investigator,
  LegalCounsel,
  LawEnforcement,
};

/// Investigation stages in their natural order.
enum class Stage : std::uint8_t {
  AffidavitWarrant,
  Investigation,
  Analysis,
  PresentedInCourt,
  JudgementDay,
  CaseClosed,
  PotentialAppeal,
};

enum class Right : std::uint8_t {
  ReadEvidence,
  UploadFile,
  UploadAnalysis,
  RequestAccess,
  ChangeStage,
  ExtractProvenance,
};

inline constexpr std::array kAllRoles{Role::DigitalForensicsExaminer, Role::Investigator,
                                      Role::LegalCounsel, Role::LawEnforcement};
inline constexpr std::array kAllStages{Stage::AffidavitWarrant, Stage::Investigation,
                                       Stage::Analysis,         Stage::PresentedInCourt,
                                       Stage::JudgementDay,     Stage::CaseClosed,
                                       Stage::PotentialAppeal};
inline constexpr std::array kAllRights{Right::ReadEvidence,  Right::UploadFile,
                                       Right::UploadAnalysis, Right::RequestAccess,
                                       Right::ChangeStage,   Right::ExtractProvenance};

std::string_view to_string(Role r) noexcept;
std::string_view to_string(Stage s) noexcept;
std::string_view to_string(Right r) noexcept;

std::optional<Role> parse_role(std::string_view s) noexcept;
std::optional<Stage> parse_stage(std::string_view s) noexcept;
std::optional<Right> parse_right(std::string_view s) noexcept;

/// Small bit set over Right.
class RightSet {
 public:
  constexpr RightSet() = default;
  constexpr RightSet(std::initializer_list<Right> rights) {
    for (auto r : rights) insert(r);
  }

  constexpr void insert(Right r) noexcept { bits_ |= bit(r); }
  constexpr void erase(Right r) noexcept { bits_ &= static_cast<std::uint8_t>(~bit(r)); }
  constexpr bool contains(Right r) const noexcept { return (bits_ & bit(r)) != 0; }
  constexpr bool empty() const noexcept { return bits_ == 0; }
  constexpr std::uint8_t bits() const noexcept { return bits_; }

  std::vector<Right> to_vector() const;
  /// Comma-separated right names in enumeration order.
  std::string to_string() const;

  constexpr bool operator==(const RightSet&) const = default;

 private:
  static constexpr std::uint8_t bit(Right r) noexcept {
    return static_cast<std::uint8_t>(1u << static_cast<unsigned>(r));
  }
  std::uint8_t bits_ = 0;
};

}  // namespace caseledger
