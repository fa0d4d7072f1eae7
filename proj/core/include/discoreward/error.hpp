#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace discoreward {

enum class ErrorCode {
  kMalformedInput,
  kInvariantViolation,
  kEmptyDocument,
  kInvalidArgument,
  kInvalidK,
  kEmptyCorpus,
  kSingleClassCorpus,
  kWidthMismatch,
  kFingerprintMismatch,
  kVersionMismatch,
  kCorruptFile,
  kEmptyEssay,
  kMissingTerminator,
  kMalformedObject,
  kMissingKey,
  kOutOfRange,
  kNonInteger,
  kTransport,
  kNegativeScore,
  kIndexOutOfRange,
  kMissingDependency,
  kNonFinite,
  kLengthMismatch,
  kZeroVariance,
  kVocabularyMismatch,
  kIo,
};

std::string_view error_code_name(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above so that
// callers (the CLI, the HTTP service) can map it without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace discoreward
