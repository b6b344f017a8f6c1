#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <string_view>
#include <type_traits>
#include <vector>

#include "patternpress/error.hpp"

namespace patternpress {

static_assert(std::endian::native == std::endian::little,
              "patternpress assumes a little-endian host");

using Bytes = std::vector<std::uint8_t>;
using ByteSpan = std::span<const std::uint8_t>;

template <typename T>
  requires std::is_trivially_copyable_v<T>
inline T load_le(const std::uint8_t* p) noexcept {
  T v;
  std::memcpy(&v, p, sizeof(T));
  return v;
}

template <typename T>
  requires std::is_trivially_copyable_v<T>
inline void store_le(std::uint8_t* p, T v) noexcept {
  std::memcpy(p, &v, sizeof(T));
}

/// Reads `width` (<= 8) little-endian bytes zero-extended into a word.
inline std::uint64_t load_word(const std::uint8_t* p, std::size_t width) noexcept {
  if (width == 8) return load_le<std::uint64_t>(p);
  std::uint64_t v = 0;
  std::memcpy(&v, p, width);
  return v;
}

/// Append-only little-endian record writer.
class ByteWriter {
 public:
  ByteWriter() = default;
  explicit ByteWriter(Bytes& sink) : out_(&sink) {}

  template <typename T>
    requires std::is_arithmetic_v<T>
  void put(T v) {
    const auto at = buf().size();
    buf().resize(at + sizeof(T));
    store_le(buf().data() + at, v);
  }
  void put_bytes(ByteSpan bytes) { buf().insert(buf().end(), bytes.begin(), bytes.end()); }
  void put_bytes(std::string_view s) {
    buf().insert(buf().end(), reinterpret_cast<const std::uint8_t*>(s.data()),
                 reinterpret_cast<const std::uint8_t*>(s.data()) + s.size());
  }

  Bytes& buf() { return out_ != nullptr ? *out_ : own_; }
  Bytes take() { return std::move(buf()); }

 private:
  Bytes own_;
  Bytes* out_ = nullptr;
};

/// Bounds-checked little-endian reader. Running off the end throws
/// TruncatedInput with the byte offset of the failed read.
class ByteReader {
 public:
  explicit ByteReader(ByteSpan data, ErrorCode on_short = ErrorCode::TruncatedInput)
      : data_(data), on_short_(on_short) {}

  template <typename T>
    requires std::is_arithmetic_v<T>
  T get(std::string_view field) {
    require(sizeof(T), field);
    T v = load_le<T>(data_.data() + pos_);
    pos_ += sizeof(T);
    return v;
  }

  ByteSpan get_bytes(std::size_t n, std::string_view field) {
    require(n, field);
    auto s = data_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

  std::size_t position() const noexcept { return pos_; }
  std::size_t remaining() const noexcept { return data_.size() - pos_; }
  bool done() const noexcept { return pos_ == data_.size(); }

 private:
  void require(std::size_t n, std::string_view field) const {
    if (n > data_.size() - pos_) {
      throw Error(on_short_,
                  "input ends inside field '" + std::string(field) + "'", pos_);
    }
  }

  ByteSpan data_;
  std::size_t pos_ = 0;
  ErrorCode on_short_;
};

}  // namespace patternpress
