// Copyright 2026 The refute-absa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace refute {

enum class ErrorKind {
  Parse,
  Validation,
  InsufficientData,
  Config,
  DegenerateDesign,
  InvalidLag,
  UnstableTest,
  Generation,
  Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Base exception for every failure raised by the library. The kind lets
/// callers (the grid runner in particular) decide between skipping a spec,
/// marking it untestable, or aborting the run.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public Error {
 public:
  ParseError(std::string_view file, std::size_t line, std::string_view msg);

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

inline Error validation_error(const std::string& msg) {
  return Error(ErrorKind::Validation, msg);
}
inline Error insufficient_data(const std::string& msg) {
  return Error(ErrorKind::InsufficientData, msg);
}
inline Error config_error(const std::string& msg) {
  return Error(ErrorKind::Config, msg);
}
inline Error degenerate_design(const std::string& msg) {
  return Error(ErrorKind::DegenerateDesign, msg);
}
inline Error io_error(const std::string& msg) {
  return Error(ErrorKind::Io, msg);
}

}  // namespace refute
