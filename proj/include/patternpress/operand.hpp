#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "patternpress/bytes.hpp"

namespace patternpress {

using WordReader = std::function<std::uint64_t(std::uint64_t)>;

/// One input of a decode step: either a materialized buffer or a fused
/// producer evaluated on demand. Both expose element reads as zero-extended
/// little-endian words; only materialized operands expose their bytes.
/// Elements wider than 8 bytes have no word form and must stay materialized.
class Operand {
 public:
  Operand() = default;

  static Operand buffer(ByteSpan bytes, std::size_t elem_bytes, std::uint64_t count);
  static Operand lazy(WordReader reader, std::size_t elem_bytes, std::uint64_t count);

  std::uint64_t word(std::uint64_t i) const {
    if (direct_) return load_word(data_ + i * elem_bytes_, elem_bytes_);
    return reader_(i);
  }
  const WordReader& reader() const noexcept { return reader_; }

  bool materialized() const noexcept { return materialized_; }
  /// Throws InvalidArgument for lazy operands.
  ByteSpan bytes() const;
  /// 8-byte elements viewed in place; throws InvalidArgument when the operand
  /// is lazy, has another width, or is misaligned.
  std::span<const std::uint64_t> words64() const;

  std::uint64_t count() const noexcept { return count_; }
  std::size_t elem_bytes() const noexcept { return elem_bytes_; }

 private:
  WordReader reader_;
  ByteSpan bytes_;
  const std::uint8_t* data_ = nullptr;
  bool direct_ = false;  // materialized with elements of at most 8 bytes
  std::size_t elem_bytes_ = 8;
  std::uint64_t count_ = 0;
  bool materialized_ = false;
};

}  // namespace patternpress
