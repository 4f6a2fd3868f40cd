#include "caseledger/roles.hpp"

namespace caseledger {

std::string_view to_string(Role r) noexcept {
  switch (r) {
    case Role::DigitalForensicsExaminer: return "DigitalForensicsExaminer";
    case Role::Investigator: return "Investigator";
    case Role::LegalCounsel: return "LegalCounsel";
    case Role::LawEnforcement: return "LawEnforcement";
  }
  return "?";
}

std::string_view to_string(Stage s) noexcept {
  switch (s) {
    case Stage::AffidavitWarrant: return "AffidavitWarrant";
    case Stage::Investigation: return "Investigation";
    case Stage::Analysis: return "Analysis";
    case Stage::PresentedInCourt: return "PresentedInCourt";
    case Stage::JudgementDay: return "JudgementDay";
    case Stage::CaseClosed: return "CaseClosed";
    case Stage::PotentialAppeal: return "PotentialAppeal";
  }
  return "?";
}

std::string_view to_string(Right r) noexcept {
  switch (r) {
    case Right::ReadEvidence: return "ReadEvidence";
    case Right::UploadFile: return "UploadFile";
    case Right::UploadAnalysis: return "UploadAnalysis";
    case Right::RequestAccess: return "RequestAccess";
    case Right::ChangeStage: return "ChangeStage";
    case Right::ExtractProvenance: return "ExtractProvenance";
  }
  return "?";
}

std::optional<Role> parse_role(std::string_view s) noexcept {
  for (auto r : kAllRoles)
    if (to_string(r) == s) return r;
  return std::nullopt;
}

std::optional<Stage> parse_stage(std::string_view s) noexcept {
  for (auto st : kAllStages)
    if (to_string(st) == s) return st;
  return std::nullopt;
}

std::optional<Right> parse_right(std::string_view s) noexcept {
  for (auto r : kAllRights)
    if (to_string(r) == s) return r;
  return std::nullopt;
}

std::vector<Right> RightSet::to_vector() const {
  std::vector<Right> out;
  for (auto r : kAllRights)
    if (contains(r)) out.push_back(r);
  return out;
}

std::string RightSet::to_string() const {
  std::string out;
  for (auto r : to_vector()) {
    if (!out.empty()) out.push_back(',');
    out.append(caseledger::to_string(r));
  }
  return out;
}

}  // namespace caseledger
