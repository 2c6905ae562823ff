// Copyright 2026 The refute-absa Authors
// SPDX-License-Identifier: Apache-2.0

#include "refute/error.hpp"

namespace refute {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::InsufficientData: return "insufficient-data";
    case ErrorKind::Config: return "config";
    case ErrorKind::DegenerateDesign: return "degenerate-design";
    case ErrorKind::InvalidLag: return "invalid-lag";
    case ErrorKind::UnstableTest: return "unstable-test";
    case ErrorKind::Generation: return "generation";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

ParseError::ParseError(std::string_view file, std::size_t line,
                       std::string_view msg)
    : Error(ErrorKind::Parse, std::string(file) + ":" + std::to_string(line) +
                                  ": " + std::string(msg)),
      line_(line) {}

}  // namespace refute
