#include "ostrain/error.hpp"

namespace ostrain {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMissingDirectory: return "missing directory";
    case ErrorCode::kSequenceTooShort: return "sequence too short";
    case ErrorCode::kDimensionMismatch: return "dimension mismatch";
    case ErrorCode::kUndecodableFile: return "undecodable file";
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kVolumeTooSmall: return "volume too small";
    case ErrorCode::kSingleClass: return "single-class training set";
    case ErrorCode::kProtocolPrecondition: return "protocol precondition violated";
    case ErrorCode::kIdMismatch: return "id mismatch";
    case ErrorCode::kParse: return "parse error";
    case ErrorCode::kIo: return "io error";
  }
  return "unknown";
}

}  // namespace ostrain
