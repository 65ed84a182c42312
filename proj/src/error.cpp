#include "locforge/error.hpp"

namespace locforge {

std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::MalformedTables: return "MalformedTables";
    case ErrorKind::TargetMismatch: return "TargetMismatch";
    case ErrorKind::NotAPartialOrder: return "NotAPartialOrder";
    case ErrorKind::NotALattice: return "NotALattice";
    case ErrorKind::NotDistributive: return "NotDistributive";
    case ErrorKind::NotAHom: return "NotAHom";
    case ErrorKind::NoLeftAdjoint: return "NoLeftAdjoint";
    case ErrorKind::NotOpen: return "NotOpen";
    case ErrorKind::NotMaximal: return "NotMaximal";
    case ErrorKind::NotStable: return "NotStable";
    case ErrorKind::NotTransitive: return "NotTransitive";
    case ErrorKind::NotFunctorial: return "NotFunctorial";
    case ErrorKind::NotNatural: return "NotNatural";
    case ErrorKind::NotAdjointNatural: return "NotAdjointNatural";
    case ErrorKind::NotANucleus: return "NotANucleus";
    case ErrorKind::NotAPreNucleus: return "NotAPreNucleus";
    case ErrorKind::NotAnAction: return "NotAnAction";
    case ErrorKind::NotASheaf: return "NotASheaf";
    case ErrorKind::MissingTerminal: return "MissingTerminal";
    case ErrorKind::NoPullbacks: return "NoPullbacks";
    case ErrorKind::NotInternalLocale: return "NotInternalLocale";
    case ErrorKind::NotCartesianLift: return "NotCartesianLift";
    case ErrorKind::CoverLiftFail: return "CoverLiftFail";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::InternalInconsistency: return "InternalInconsistency";
    case ErrorKind::MalformedDocument: return "MalformedDocument";
    case ErrorKind::UnsupportedDocument: return "UnsupportedDocument";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, std::string message, json witness)
    : std::runtime_error(std::move(message)), kind_(kind), witness_(std::move(witness)) {}

void fail(ErrorKind kind, std::string message, json witness) {
  throw Error(kind, std::move(message), std::move(witness));
}

std::string_view to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::inapplicable: return "inapplicable";
    case Status::budget_exceeded: return "budget-exceeded";
  }
  return "fail";
}

json Verdict::to_json() const {
  json j;
  j["verdict"] = std::string(to_string(status));
  j["witnesses"] = witnesses;
  return j;
}

}  // namespace locforge
