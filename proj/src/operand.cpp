#include "patternpress/operand.hpp"

#include <string>

namespace patternpress {

Operand Operand::buffer(ByteSpan bytes, std::size_t elem_bytes, std::uint64_t count) {
  if (elem_bytes == 0) throw Error(ErrorCode::InvalidArgument, "operand elements must be at least 1 byte");
  if (bytes.size() < elem_bytes * count) {
    throw Error(ErrorCode::TruncatedStream, "stream holds " + std::to_string(bytes.size()) + " bytes, " +
                                                std::to_string(elem_bytes * count) + " needed");
  }
  Operand op;
  const auto* p = bytes.data();
  if (elem_bytes == 8) {
    op.reader_ = [p](std::uint64_t i) { return load_le<std::uint64_t>(p + 8 * i); };
  } else if (elem_bytes == 1) {
    op.reader_ = [p](std::uint64_t i) { return static_cast<std::uint64_t>(p[i]); };
  } else if (elem_bytes < 8) {
    op.reader_ = [p, elem_bytes](std::uint64_t i) { return load_word(p + elem_bytes * i, elem_bytes); };
  } else {
    op.reader_ = [elem_bytes](std::uint64_t) -> std::uint64_t {
      throw Error(ErrorCode::InvalidArgument, std::to_string(elem_bytes) + "-byte elements have no word form");
    };
  }
  op.bytes_ = bytes.first(elem_bytes * count);
  op.data_ = op.bytes_.data();
  op.direct_ = elem_bytes <= 8;
  op.elem_bytes_ = elem_bytes;
  op.count_ = count;
  op.materialized_ = true;
  return op;
}

Operand Operand::lazy(WordReader reader, std::size_t elem_bytes, std::uint64_t count) {
  Operand op;
  op.reader_ = std::move(reader);
  op.elem_bytes_ = elem_bytes;
  op.count_ = count;
  op.materialized_ = false;
  return op;
}

ByteSpan Operand::bytes() const {
  if (!materialized_) throw Error(ErrorCode::InvalidArgument, "operand is a fused producer with no buffer");
  return bytes_;
}

std::span<const std::uint64_t> Operand::words64() const {
  if (!materialized_ || elem_bytes_ != 8) {
    throw Error(ErrorCode::InvalidArgument, "operand is not a materialized 8-byte buffer");
  }
  if (reinterpret_cast<std::uintptr_t>(bytes_.data()) % alignof(std::uint64_t) != 0) {
    throw Error(ErrorCode::InvalidArgument, "operand buffer is misaligned");
  }
  return {reinterpret_cast<const std::uint64_t*>(bytes_.data()), static_cast<std::size_t>(count_)};
}

}  // namespace patternpress
