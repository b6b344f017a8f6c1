#include "patternpress/codecs/bitpack.hpp"

#include <algorithm>
#include <bit>
#include <cstring>

#include "record.hpp"

namespace patternpress::codecs {

Bytes BitPackParams::to_record() const {
  ByteWriter w;
  w.put(bit_width);
  w.put(for_base);
  return w.take();
}

BitPackParams BitPackParams::from_record(ByteSpan record) {
  auto r = detail::record_reader(record);
  BitPackParams p;
  p.bit_width = r.get<std::uint8_t>("bit width");
  p.for_base = r.get<std::int64_t>("FOR base");
  detail::finish_record(r, "Bit-packing");
  if (p.bit_width > 64) throw Error(ErrorCode::DecodeError, "bit width " + std::to_string(p.bit_width) + " > 64");
  return p;
}

std::uint64_t packed_size(std::uint64_t count, unsigned bit_width) noexcept {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(count) * bit_width + 7) / 8);
}

BitPacked bitpack_encode(std::span<const std::int64_t> values) {
  BitPacked out;
  if (values.empty()) return out;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const auto base = static_cast<std::uint64_t>(*lo);
  const auto range = static_cast<std::uint64_t>(*hi) - base;
  const unsigned w = range == 0 ? 0 : 64 - static_cast<unsigned>(std::countl_zero(range));
  out.params = {static_cast<std::uint8_t>(w), *lo};
  out.packed.assign(packed_size(values.size(), w), 0);
  if (w == 0) return out;

  auto* dst = out.packed.data();
  std::uint64_t bit = 0;
  for (auto v : values) {
    const auto field = static_cast<unsigned __int128>(static_cast<std::uint64_t>(v) - base) << (bit % 8);
    const auto first = bit / 8;
    const auto nbytes = ((bit % 8) + w + 7) / 8;
    for (std::uint64_t k = 0; k < nbytes; ++k) {
      dst[first + k] |= static_cast<std::uint8_t>(field >> (8 * k));
    }
    bit += w;
  }
  return out;
}

std::uint64_t extract_bits(ByteSpan packed, std::uint64_t bit_pos, unsigned width) noexcept {
  if (width == 0) return 0;
  const auto byte = bit_pos / 8;
  const auto shift = static_cast<unsigned>(bit_pos % 8);
  std::uint64_t lo = 0;
  const auto avail = std::min<std::uint64_t>(8, packed.size() - byte);
  std::memcpy(&lo, packed.data() + byte, avail);
  std::uint64_t v = lo >> shift;
  if (shift + width > 64) v |= static_cast<std::uint64_t>(packed[byte + 8]) << (64 - shift);
  return width == 64 ? v : v & ((std::uint64_t{1} << width) - 1);
}

ElementMap bitpack_map(ByteSpan packed, const BitPackParams& params, std::uint64_t n) {
  const unsigned w = params.bit_width;
  if (packed.size() != packed_size(n, w)) {
    throw Error(ErrorCode::TruncatedStream, "packed stream holds " + std::to_string(packed.size()) +
                                                " bytes, " + std::to_string(packed_size(n, w)) + " expected");
  }
  const auto base = static_cast<std::uint64_t>(params.for_base);
  if (w == 0) {
    return [base](std::uint64_t, std::uint8_t* dst) { store_le(dst, base); };
  }
  return [packed, w, base](std::uint64_t i, std::uint8_t* dst) {
    store_le(dst, base + extract_bits(packed, i * w, w));
  };
}

ElementMap bitpack_map(Operand packed, const BitPackParams& params, std::uint64_t n) {
  if (packed.materialized()) return bitpack_map(packed.bytes(), params, n);
  const unsigned w = params.bit_width;
  if (packed.count() != packed_size(n, w)) {
    throw Error(ErrorCode::TruncatedStream, "packed stream holds " + std::to_string(packed.count()) +
                                                " bytes, " + std::to_string(packed_size(n, w)) + " expected");
  }
  const auto base = static_cast<std::uint64_t>(params.for_base);
  return [packed = std::move(packed), w, base](std::uint64_t i, std::uint8_t* dst) {
    const auto bit = i * w;
    const auto first = bit / 8;
    const auto last = (bit + w + 7) / 8;  // exclusive
    unsigned __int128 acc = 0;
    for (auto b = first; b < last; ++b) {
      acc |= static_cast<unsigned __int128>(packed.word(b) & 0xFF) << (8 * (b - first));
    }
    auto v = static_cast<std::uint64_t>(acc >> (bit % 8));
    if (w < 64) v &= (std::uint64_t{1} << w) - 1;
    store_le(dst, base + v);
  };
}

WordReader bitpack_words(Operand packed, const BitPackParams& params, std::uint64_t n) {
  const unsigned w = params.bit_width;
  const auto base = static_cast<std::uint64_t>(params.for_base);
  if (!packed.materialized()) {
    auto map = bitpack_map(std::move(packed), params, n);
    return [map = std::move(map)](std::uint64_t i) {
      std::uint8_t buf[8];
      map(i, buf);
      return load_le<std::uint64_t>(buf);
    };
  }
  const auto bytes = packed.bytes();
  if (bytes.size() != packed_size(n, w)) {
    throw Error(ErrorCode::TruncatedStream, "packed stream holds " + std::to_string(bytes.size()) + " bytes, " +
                                                std::to_string(packed_size(n, w)) + " expected");
  }
  return [bytes, w, base](std::uint64_t i) { return base + extract_bits(bytes, i * w, w); };
}

FullyParallelKernel bitpack_decode_kernel(ByteSpan packed, const BitPackParams& params, std::uint64_t n) {
  return {n, 8, bitpack_map(packed, params, n)};
}

}  // namespace patternpress::codecs
