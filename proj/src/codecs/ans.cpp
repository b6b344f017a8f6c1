#include "patternpress/codecs/ans.hpp"

#include <algorithm>
#include <memory>
#include <numeric>

#include "record.hpp"

namespace patternpress::codecs {

namespace {

constexpr std::uint32_t kStateLow = 1u << 16;  // states live in [2^16, 2^32)

void check_table_log(unsigned table_log) {
  if (table_log < kAnsMinTableLog || table_log > kAnsMaxTableLog) {
    throw Error(ErrorCode::InvalidArgument, "table_log " + std::to_string(table_log) + " outside [8, 14]");
  }
}

}  // namespace

Bytes AnsParams::to_record() const {
  ByteWriter w;
  w.put(chunk_size);
  w.put(table_log);
  w.put(input_size);
  for (auto f : freqs) w.put(f);
  w.put(static_cast<std::uint32_t>(n_chunks()));
  for (auto o : chunk_offsets) w.put(o);
  return w.take();
}

AnsParams AnsParams::from_record(ByteSpan record) {
  auto r = detail::record_reader(record);
  AnsParams p;
  p.chunk_size = r.get<std::uint32_t>("chunk size");
  p.table_log = r.get<std::uint8_t>("table log");
  p.input_size = r.get<std::uint64_t>("input size");
  for (auto& f : p.freqs) f = r.get<std::uint16_t>("frequency");
  const auto n = r.get<std::uint32_t>("chunk count");
  if ((static_cast<std::uint64_t>(n) + 1) * 8 > r.remaining()) {
    throw Error(ErrorCode::TruncatedInput, "input ends inside field 'chunk offsets'", r.position());
  }
  p.chunk_offsets.resize(static_cast<std::size_t>(n) + 1);
  for (auto& o : p.chunk_offsets) o = r.get<std::uint64_t>("chunk offset");
  detail::finish_record(r, "ANS");
  return p;
}

std::array<std::uint16_t, 256> normalize_frequencies(const std::array<std::uint64_t, 256>& counts,
                                                     unsigned table_log) {
  check_table_log(table_log);
  const std::uint64_t target = std::uint64_t{1} << table_log;
  const auto total = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  std::array<std::uint16_t, 256> f{};
  if (total == 0) {
    f[0] = static_cast<std::uint16_t>(target);
    return f;
  }
  std::int64_t sum = 0;
  for (int s = 0; s < 256; ++s) {
    if (counts[s] == 0) continue;
    const auto scaled = static_cast<std::uint64_t>(static_cast<unsigned __int128>(counts[s]) * target / total);
    f[s] = static_cast<std::uint16_t>(std::max<std::uint64_t>(1, scaled));
    sum += f[s];
  }
  std::int64_t diff = static_cast<std::int64_t>(target) - sum;
  if (diff > 0) {
    const auto top = std::max_element(counts.begin(), counts.end()) - counts.begin();
    f[top] = static_cast<std::uint16_t>(f[top] + diff);
    return f;
  }
  // Over budget because rare symbols were lifted to 1: take the excess from
  // the largest entries, never below 1.
  while (diff < 0) {
    const auto top = std::max_element(f.begin(), f.end()) - f.begin();
    const auto give = std::min<std::int64_t>(-diff, std::max<std::int64_t>(1, (f[top] - 1) / 2));
    f[top] = static_cast<std::uint16_t>(f[top] - give);
    diff += give;
  }
  return f;
}

AnsEncoded ans_encode(ByteSpan input, std::uint32_t chunk_size, unsigned table_log) {
  check_table_log(table_log);
  if (chunk_size == 0 || (chunk_size & (chunk_size - 1)) != 0) {
    throw Error(ErrorCode::InvalidArgument, "chunk_size must be a power of two");
  }
  std::array<std::uint64_t, 256> counts{};
  for (auto b : input) ++counts[b];

  AnsEncoded out;
  auto& p = out.params;
  p.chunk_size = chunk_size;
  p.table_log = static_cast<std::uint8_t>(table_log);
  p.input_size = input.size();
  p.freqs = normalize_frequencies(counts, table_log);
  std::array<std::uint32_t, 256> cum{};
  for (int s = 1; s < 256; ++s) cum[s] = cum[s - 1] + p.freqs[s - 1];

  const auto n_chunks = (input.size() + chunk_size - 1) / chunk_size;
  p.chunk_offsets.reserve(n_chunks + 1);
  p.chunk_offsets.push_back(0);
  std::vector<std::uint16_t> words;
  ByteWriter w(out.payload);
  for (std::size_t c = 0; c < n_chunks; ++c) {
    const auto chunk = input.subspan(c * chunk_size, std::min<std::size_t>(chunk_size, input.size() - c * chunk_size));
    words.clear();
    std::uint32_t x = kStateLow;
    for (auto it = chunk.rbegin(); it != chunk.rend(); ++it) {
      const std::uint32_t f = p.freqs[*it];
      const std::uint64_t x_max = (std::uint64_t{kStateLow >> table_log} << 16) * f;
      while (x >= x_max) {
        words.push_back(static_cast<std::uint16_t>(x & 0xFFFF));
        x >>= 16;
      }
      x = ((x / f) << table_log) + (x % f) + cum[*it];
    }
    w.put(x);
    for (auto it = words.rbegin(); it != words.rend(); ++it) w.put(*it);
    p.chunk_offsets.push_back(out.payload.size());
  }
  return out;
}

AnsDecoder::AnsDecoder(const AnsParams& params) : table_log_(params.table_log) {
  if (table_log_ < kAnsMinTableLog || table_log_ > kAnsMaxTableLog) {
    throw Error(ErrorCode::ChunkDecodeError, "table_log " + std::to_string(table_log_) + " outside [8, 14]");
  }
  const std::uint32_t total = 1u << table_log_;
  std::uint32_t sum = 0;
  for (int s = 0; s < 256; ++s) {
    cum_[s] = sum;
    freq_[s] = params.freqs[s];
    sum += params.freqs[s];
  }
  if (sum != total) {
    throw Error(ErrorCode::ChunkDecodeError,
                "frequency table sums to " + std::to_string(sum) + ", expected " + std::to_string(total));
  }
  slot_symbol_.resize(total);
  for (int s = 0; s < 256; ++s) {
    std::fill_n(slot_symbol_.begin() + cum_[s], freq_[s], static_cast<std::uint8_t>(s));
  }
}

void AnsDecoder::decode_chunk(ByteSpan chunk, std::span<std::uint8_t> out, std::uint64_t chunk_id) const {
  if (chunk.size() < 4 || chunk.size() % 2 != 0) {
    throw Error(ErrorCode::ChunkDecodeError, "chunk of " + std::to_string(chunk.size()) + " bytes is malformed",
                chunk_id);
  }
  std::uint32_t x = load_le<std::uint32_t>(chunk.data());
  const auto* words = chunk.data() + 4;
  const std::size_t n_words = (chunk.size() - 4) / 2;
  std::size_t next = 0;
  const std::uint32_t mask = (1u << table_log_) - 1;
  if (x < kStateLow) throw Error(ErrorCode::ChunkDecodeError, "initial state below 2^16", chunk_id);
  for (auto& o : out) {
    const std::uint32_t slot = x & mask;
    const auto s = slot_symbol_[slot];
    o = s;
    x = freq_[s] * (x >> table_log_) + slot - cum_[s];
    while (x < kStateLow) {
      if (next == n_words) throw Error(ErrorCode::ChunkDecodeError, "chunk ends before its symbols", chunk_id);
      x = (x << 16) | load_le<std::uint16_t>(words + 2 * next++);
    }
  }
  if (next != n_words) {
    throw Error(ErrorCode::ChunkDecodeError, std::to_string(n_words - next) + " words left after decoding", chunk_id);
  }
  if (x != kStateLow) throw Error(ErrorCode::ChunkDecodeError, "final state mismatch", chunk_id);
}

NonParallelKernel ans_decode_plan(ByteSpan payload, const AnsParams& params) {
  if (params.chunk_size == 0) throw Error(ErrorCode::ChunkDecodeError, "chunk size 0");
  const auto want = (params.input_size + params.chunk_size - 1) / params.chunk_size;
  if (params.n_chunks() != want) {
    throw Error(ErrorCode::ChunkDecodeError,
                std::to_string(params.n_chunks()) + " chunks for " + std::to_string(want) + " expected");
  }
  NonParallelKernel k;
  k.input = payload;
  k.out_elem_bytes = 1;
  if (params.chunk_offsets.empty()) {
    k.chunk_in_offsets = {0};
    k.chunk_out_offsets = {0};
  } else {
    k.chunk_in_offsets = params.chunk_offsets;
    if (k.chunk_in_offsets.front() != 0 || k.chunk_in_offsets.back() != payload.size()) {
      throw Error(ErrorCode::ChunkDecodeError, "chunk offsets do not span the payload");
    }
  }
  k.chunk_out_offsets.resize(params.n_chunks() + 1);
  for (std::uint64_t c = 0; c <= params.n_chunks(); ++c) {
    k.chunk_out_offsets[c] = std::min<std::uint64_t>(c * params.chunk_size, params.input_size);
  }
  auto decoder = std::make_shared<const AnsDecoder>(params);
  k.decode = [decoder](std::uint64_t c, ByteSpan in, std::span<std::uint8_t> out) {
    decoder->decode_chunk(in, out, c);
  };
  return k;
}

}  // namespace patternpress::codecs
