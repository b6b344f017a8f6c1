#pragma once

#include <string>
#include <string_view>

#include "patternpress/bytes.hpp"

namespace patternpress::codecs::detail {

// Param records live inside the container, so a short record is a truncated
// container and a long one has trailing bytes.
inline ByteReader record_reader(ByteSpan record) { return ByteReader(record, ErrorCode::TruncatedInput); }

inline void finish_record(const ByteReader& r, std::string_view codec) {
  if (!r.done()) {
    throw Error(ErrorCode::TrailingBytes,
                std::string(codec) + " params carry " + std::to_string(r.remaining()) + " extra bytes");
  }
}

inline ByteSpan as_bytes(std::span<const std::int64_t> v) {
  return {reinterpret_cast<const std::uint8_t*>(v.data()), v.size() * 8};
}

}  // namespace patternpress::codecs::detail
