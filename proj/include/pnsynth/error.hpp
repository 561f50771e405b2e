#pragma once

#include <stdexcept>
#include <string>

namespace pnsynth {

/// Failure categories; the CLI maps each to a stable exit code.
enum class ErrorKind {
  Parse,                   ///< malformed input file
  Validation,              ///< structurally invalid net or illegal firing
  StateCap,                ///< exploration/enumeration exceeded its bound
  Safety,                  ///< a firing produced a token count outside {0,1}
  Partition,               ///< unit invariants do not partition the place set
  Infeasible,              ///< no supervisor exists (or a constraint is violated at M0)
  InadmissibleSupervisor,  ///< a control place would block an uncontrollable transition
  Internal,                ///< broken internal assumption
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

inline const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::StateCap: return "state-cap";
    case ErrorKind::Safety: return "safety";
    case ErrorKind::Partition: return "partition";
    case ErrorKind::Infeasible: return "infeasible";
    case ErrorKind::InadmissibleSupervisor: return "inadmissible-supervisor";
    case ErrorKind::Internal: return "internal";
  }
  return "unknown";
}

}  // namespace pnsynth
