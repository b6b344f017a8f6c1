#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace patternpress {

enum class ErrorCode : std::uint8_t {
  // container
  BadMagic,
  UnsupportedVersion,
  TruncatedInput,
  ArityMismatch,
  BadTag,
  TrailingBytes,
  // execution
  InvalidConfig,
  OutOfGeometry,
  DecodeError,
  ChunkDecodeError,
  ArithmeticOverflow,
  // codecs
  TruncatedStream,
  IndexOutOfDictionary,
  CountOverflow,
  NotDecimalRepresentable,
  TypeMismatch,
  ChecksumMismatch,
  // pipeline text
  ParseError,
  ArityError,
  UnknownCodec,
  // misc
  InvalidArgument,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure in the library surfaces as this exception. `where()` carries
/// the offending position when one exists: an output element index for
/// decode errors, a chunk id for chunk errors, a character offset for parse
/// errors, a byte offset for container errors.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::uint64_t> where = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::uint64_t> where() const noexcept { return where_; }

  /// Same error with `context` prepended to the message.
  Error with_context(std::string_view context) const;
  /// Same error located at `where` unless it already has a position.
  Error located(std::uint64_t where) const;

 private:
  ErrorCode code_;
  std::optional<std::uint64_t> where_;
  std::string detail_;
};

}  // namespace patternpress
