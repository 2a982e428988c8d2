#include "edgecache/error.hpp"

namespace edgecache {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::RangeDegenerate: return "RangeDegenerate";
    case ErrorCode::EmptyFeatures: return "EmptyFeatures";
    case ErrorCode::LibraryTooSmall: return "LibraryTooSmall";
    case ErrorCode::EmptyLibrary: return "EmptyLibrary";
    case ErrorCode::BadUniform: return "BadUniform";
    case ErrorCode::WrongRegime: return "WrongRegime";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownContent: return "UnknownContent";
    case ErrorCode::EmptyWindow: return "EmptyWindow";
    case ErrorCode::BadInput: return "BadInput";
    case ErrorCode::NeedsIntegerSizes: return "NeedsIntegerSizes";
    case ErrorCode::ColdStart: return "ColdStart";
    case ErrorCode::NotCached: return "NotCached";
    case ErrorCode::UnknownPolicy: return "UnknownPolicy";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace edgecache
