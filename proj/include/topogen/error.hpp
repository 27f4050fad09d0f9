// Copyright 2026 The topogen Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace topogen {

enum class ErrorCode {
  kUnknownNode,
  kSelfLoop,
  kDuplicateLink,
  kNonPositiveLength,
  kUnknownLink,
  kDuplicateNode,
  kEmptyTopology,
  kInvalidParams,
  kGenerationFailed,
  kUnknownStrategy,
  kMismatchedBins,
  kIo,
  kMissingTable,
  kDanglingReference,
  kVersionMismatch,
  kInvalidWorkbook,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownNode: return "unknown_node";
    case ErrorCode::kSelfLoop: return "self_loop";
    case ErrorCode::kDuplicateLink: return "duplicate_link";
    case ErrorCode::kNonPositiveLength: return "non_positive_length";
    case ErrorCode::kUnknownLink: return "unknown_link";
    case ErrorCode::kDuplicateNode: return "duplicate_node";
    case ErrorCode::kEmptyTopology: return "empty_topology";
    case ErrorCode::kInvalidParams: return "invalid_params";
    case ErrorCode::kGenerationFailed: return "generation_failed";
    case ErrorCode::kUnknownStrategy: return "unknown_strategy";
    case ErrorCode::kMismatchedBins: return "mismatched_bins";
    case ErrorCode::kIo: return "io_error";
    case ErrorCode::kMissingTable: return "missing_table";
    case ErrorCode::kDanglingReference: return "dangling_reference";
    case ErrorCode::kVersionMismatch: return "version_mismatch";
    case ErrorCode::kInvalidWorkbook: return "invalid_workbook";
  }
  return "unknown";
}

// Every failure raised by the library. `offenders` lists the names involved
// (node names, link keys) when there is more than one culprit to report.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::vector<std::string> offenders = {})
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        offenders_(std::move(offenders)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::vector<std::string>& offenders() const noexcept {
    return offenders_;
  }

 private:
  ErrorCode code_;
  std::vector<std::string> offenders_;
};

// Raised when a generator gives up after its retry budget.
class GenerationFailed : public Error {
 public:
  GenerationFailed(const std::string& message, int attempts)
      : Error(ErrorCode::kGenerationFailed,
              message + " (after " + std::to_string(attempts) + " attempts)"),
        attempts_(attempts) {}

  int attempts() const noexcept { return attempts_; }

 private:
  int attempts_;
};

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) throw Error(code, message);
}

}  // namespace topogen
