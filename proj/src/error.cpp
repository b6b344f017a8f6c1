#include "patternpress/error.hpp"

namespace patternpress {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::TruncatedInput: return "TruncatedInput";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::BadTag: return "BadTag";
    case ErrorCode::TrailingBytes: return "TrailingBytes";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::OutOfGeometry: return "OutOfGeometry";
    case ErrorCode::DecodeError: return "DecodeError";
    case ErrorCode::ChunkDecodeError: return "ChunkDecodeError";
    case ErrorCode::ArithmeticOverflow: return "ArithmeticOverflow";
    case ErrorCode::TruncatedStream: return "TruncatedStream";
    case ErrorCode::IndexOutOfDictionary: return "IndexOutOfDictionary";
    case ErrorCode::CountOverflow: return "CountOverflow";
    case ErrorCode::NotDecimalRepresentable: return "NotDecimalRepresentable";
    case ErrorCode::TypeMismatch: return "TypeMismatch";
    case ErrorCode::ChecksumMismatch: return "ChecksumMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ArityError: return "ArityError";
    case ErrorCode::UnknownCodec: return "UnknownCodec";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

namespace {

std::string format(ErrorCode code, const std::string& detail, std::optional<std::uint64_t> where) {
  std::string s(to_string(code));
  s += ": ";
  s += detail;
  if (where) {
    s += " (at ";
    s += std::to_string(*where);
    s += ')';
  }
  return s;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message, std::optional<std::uint64_t> where)
    : std::runtime_error(format(code, message, where)), code_(code), where_(where), detail_(message) {}

Error Error::with_context(std::string_view context) const {
  std::string msg(context);
  msg += ": ";
  msg += detail_;
  return Error(code_, msg, where_);
}

Error Error::located(std::uint64_t where) const { return Error(code_, detail_, where_ ? where_ : where); }

}  // namespace patternpress
