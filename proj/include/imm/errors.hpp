#pragma once

#include <stdexcept>
#include <string>

namespace imm {

enum class ErrorKind {
  configuration,
  parse,
  degenerate_immersion,
  frame_construction,
  non_flat_bundle,
  precondition,
  weight,
  oracle,
  domain,
  internal,
};

std::string to_string(ErrorKind kind);

/// Base exception for every module. The kind selects the CLI exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error config_error(const std::string& msg) { return Error(ErrorKind::configuration, msg); }
inline Error precondition_error(const std::string& msg) { return Error(ErrorKind::precondition, msg); }

}  // namespace imm
