#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "patternpress/bytes.hpp"
#include "patternpress/kernels.hpp"

namespace patternpress::codecs {

inline constexpr std::uint32_t kAnsDefaultChunkSize = 4096;
inline constexpr unsigned kAnsDefaultTableLog = 12;
inline constexpr unsigned kAnsMinTableLog = 8;
inline constexpr unsigned kAnsMaxTableLog = 14;

/// Static range-ANS over bytes: one frequency table normalized to
/// 2^table_log, input split into independently coded chunks. The state lives
/// in [2^16, 2^32) and renormalizes 16 bits at a time.
struct AnsParams {
  std::uint32_t chunk_size = kAnsDefaultChunkSize;
  std::uint8_t table_log = kAnsDefaultTableLog;
  std::uint64_t input_size = 0;
  std::array<std::uint16_t, 256> freqs{};
  std::vector<std::uint64_t> chunk_offsets;  // n_chunks + 1 byte offsets into the payload

  std::uint64_t n_chunks() const noexcept {
    return chunk_offsets.empty() ? 0 : chunk_offsets.size() - 1;
  }
  /// Serialized size of the frequency table (the part a decoder must know
  /// besides the chunk index).
  static constexpr std::size_t table_bytes() noexcept { return 256 * sizeof(std::uint16_t); }

  Bytes to_record() const;
  static AnsParams from_record(ByteSpan record);
  friend bool operator==(const AnsParams&, const AnsParams&) = default;
};

struct AnsEncoded {
  Bytes payload;
  AnsParams params;
};

/// Scales symbol counts to a table summing to 2^table_log with every present
/// symbol >= 1. Throws InvalidArgument for table_log outside [8, 14].
std::array<std::uint16_t, 256> normalize_frequencies(const std::array<std::uint64_t, 256>& counts,
                                                     unsigned table_log);

/// Chunk layout: final state u32, then the 16-bit renormalization words in
/// decode order. Empty input yields zero chunks.
AnsEncoded ans_encode(ByteSpan input, std::uint32_t chunk_size = kAnsDefaultChunkSize,
                      unsigned table_log = kAnsDefaultTableLog);

/// Slot-to-symbol table built once per artifact and shared by all chunks.
class AnsDecoder {
 public:
  /// Throws ChunkDecodeError if the table does not sum to 2^table_log.
  explicit AnsDecoder(const AnsParams& params);

  /// Sequential decode of one chunk. Throws ChunkDecodeError(chunk_id) when the
  /// words run out, are left over, or the final state is not the initial one.
  void decode_chunk(ByteSpan chunk, std::span<std::uint8_t> out, std::uint64_t chunk_id) const;

 private:
  unsigned table_log_;
  std::vector<std::uint8_t> slot_symbol_;
  std::array<std::uint32_t, 256> freq_{};
  std::array<std::uint32_t, 256> cum_{};
};

/// One NonParallel kernel; each chunk decodes sequentially. The kernel views
/// `payload`. Throws ChunkDecodeError for payload/table inconsistencies.
NonParallelKernel ans_decode_plan(ByteSpan payload, const AnsParams& params);

}  // namespace patternpress::codecs
