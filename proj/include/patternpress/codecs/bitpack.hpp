#pragma once

#include <cstdint>
#include <span>

#include "patternpress/bytes.hpp"
#include "patternpress/kernels.hpp"
#include "patternpress/operand.hpp"

namespace patternpress::codecs {

/// Frame-of-reference bit packing: every value v is stored as the
/// bit_width-bit field (v - for_base), LSB-first and contiguous across bytes.
struct BitPackParams {
  std::uint8_t bit_width = 0;
  std::int64_t for_base = 0;

  Bytes to_record() const;
  static BitPackParams from_record(ByteSpan record);
  friend bool operator==(const BitPackParams&, const BitPackParams&) = default;
};

struct BitPacked {
  Bytes packed;
  BitPackParams params;
};

/// ceil(count * bit_width / 8).
std::uint64_t packed_size(std::uint64_t count, unsigned bit_width) noexcept;

/// for_base = min, bit_width = bit width of (max - min). Empty input packs to
/// width 0 with base 0.
BitPacked bitpack_encode(std::span<const std::int64_t> values);

/// Reads the `width`-bit field starting at bit `bit_pos`. The caller guarantees
/// the field lies inside `packed`.
std::uint64_t extract_bits(ByteSpan packed, std::uint64_t bit_pos, unsigned width) noexcept;

/// Element map for field i -> for_base + field. Throws TruncatedStream when the
/// packed length does not match n.
ElementMap bitpack_map(ByteSpan packed, const BitPackParams& params, std::uint64_t n);

/// Same map over an operand; a fused (lazy) operand is read byte by byte.
ElementMap bitpack_map(Operand packed, const BitPackParams& params, std::uint64_t n);
/// Element i as a word, for consumers that read the unpacked values in place.
WordReader bitpack_words(Operand packed, const BitPackParams& params, std::uint64_t n);

FullyParallelKernel bitpack_decode_kernel(ByteSpan packed, const BitPackParams& params,
                                          std::uint64_t n);

}  // namespace patternpress::codecs
