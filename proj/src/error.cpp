#include "caseledger/error.hpp"

namespace caseledger {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::MissingField: return "MissingField";
    case Errc::EmptyLeaves: return "EmptyLeaves";
    case Errc::UnknownCase: return "UnknownCase";
    case Errc::CaseExists: return "CaseExists";
    case Errc::DuplicateToken: return "DuplicateToken";
    case Errc::UnknownParent: return "UnknownParent";
    case Errc::EmptyParents: return "EmptyParents";
    case Errc::UnknownToken: return "UnknownToken";
    case Errc::AlreadyRegistered: return "AlreadyRegistered";
    case Errc::MalformedTransaction: return "MalformedTransaction";
    case Errc::EmptyMempool: return "EmptyMempool";
    case Errc::OutOfOrderBlock: return "OutOfOrderBlock";
    case Errc::InfeasibleSpec: return "InfeasibleSpec";
    case Errc::InvalidPolicy: return "InvalidPolicy";
    case Errc::InvalidEncoding: return "InvalidEncoding";
    case Errc::ReplayMismatch: return "ReplayMismatch";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace caseledger
