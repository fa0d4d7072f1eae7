#include "discoreward/error.hpp"

namespace discoreward {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kMalformedInput: return "MalformedInput";
    case ErrorCode::kInvariantViolation: return "InvariantViolation";
    case ErrorCode::kEmptyDocument: return "EmptyDocument";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kInvalidK: return "InvalidK";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kSingleClassCorpus: return "SingleClassCorpus";
    case ErrorCode::kWidthMismatch: return "WidthMismatch";
    case ErrorCode::kFingerprintMismatch: return "FingerprintMismatch";
    case ErrorCode::kVersionMismatch: return "VersionMismatch";
    case ErrorCode::kCorruptFile: return "CorruptFile";
    case ErrorCode::kEmptyEssay: return "EmptyEssay";
    case ErrorCode::kMissingTerminator: return "MissingTerminator";
    case ErrorCode::kMalformedObject: return "MalformedObject";
    case ErrorCode::kMissingKey: return "MissingKey";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kNonInteger: return "NonInteger";
    case ErrorCode::kTransport: return "Transport";
    case ErrorCode::kNegativeScore: return "NegativeScore";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kMissingDependency: return "MissingDependency";
    case ErrorCode::kNonFinite: return "NonFinite";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kZeroVariance: return "ZeroVariance";
    case ErrorCode::kVocabularyMismatch: return "VocabularyMismatch";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

}  // namespace discoreward
