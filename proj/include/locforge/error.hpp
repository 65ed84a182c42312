#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace locforge {

using json = nlohmann::json;

enum class ErrorKind {
  MalformedTables,
  TargetMismatch,
  NotAPartialOrder,
  NotALattice,
  NotDistributive,
  NotAHom,
  NoLeftAdjoint,
  NotOpen,
  NotMaximal,
  NotStable,
  NotTransitive,
  NotFunctorial,
  NotNatural,
  NotAdjointNatural,
  NotANucleus,
  NotAPreNucleus,
  NotAnAction,
  NotASheaf,
  MissingTerminal,
  NoPullbacks,
  NotInternalLocale,
  NotCartesianLift,
  CoverLiftFail,
  BudgetExceeded,
  InternalInconsistency,
  MalformedDocument,
  UnsupportedDocument,
};

std::string_view to_string(ErrorKind k);

// Thrown by validators; carries a machine-readable witness.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message, json witness = json::object());

  ErrorKind kind() const { return kind_; }
  const json& witness() const { return witness_; }

 private:
  ErrorKind kind_;
  json witness_;
};

[[noreturn]] void fail(ErrorKind kind, std::string message, json witness = json::object());

enum class Status { pass, fail, inapplicable, budget_exceeded };

std::string_view to_string(Status s);

// Outcome of a check that is allowed to fail.
struct Verdict {
  Status status = Status::pass;
  std::vector<json> witnesses;

  bool ok() const { return status == Status::pass; }
  void add_failure(json w) {
    if (status == Status::pass) status = Status::fail;
    witnesses.push_back(std::move(w));
  }
  json to_json() const;
};

struct Budget {
  std::size_t sieves = std::size_t{1} << 16;  // per object
  std::size_t maps = std::size_t{1} << 20;    // candidate assignments in enumerations
  std::size_t arrows = 20000;                 // derived categories
};

enum class OracleMode { always, automatic, never };

}  // namespace locforge
