#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace ghcert {

// Domain errors carry a stable machine-readable kind next to the human
// message; the CLI maps them to structured JSON on stderr and exit code 1.
class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const { return kind_; }

private:
  std::string kind_;
};

inline Error invalid_argument_error(const std::string& message) {
  return Error("invalid-argument", message);
}

inline Error size_limit_error(const std::string& message) {
  return Error("size-limit", message);
}

inline Error precondition_error(const std::string& message) {
  return Error("precondition", message);
}

// Signals a soundness bug (certified lower bound above a certified upper
// bound); never expected on valid inputs.
inline Error internal_inconsistency_error(const std::string& message) {
  return Error("internal-inconsistency", message);
}

}  // namespace ghcert
