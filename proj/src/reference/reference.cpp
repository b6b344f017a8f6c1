#include "patternpress/reference.hpp"

#include <string>

#include "patternpress/codecs/delta.hpp"
#include "patternpress/codecs/dict.hpp"

namespace patternpress::reference {

using namespace codecs;

std::vector<std::int64_t> bitunpack(ByteSpan packed, const BitPackParams& params, std::uint64_t n) {
  const unsigned w = params.bit_width;
  if (packed.size() != (n * w + 7) / 8) throw Error(ErrorCode::TruncatedStream, "packed size mismatch");
  std::vector<std::int64_t> out(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    std::uint64_t field = 0;
    for (unsigned b = 0; b < w; ++b) {
      const auto bit = i * w + b;
      field |= static_cast<std::uint64_t>((packed[bit / 8] >> (bit % 8)) & 1) << b;
    }
    out[i] = static_cast<std::int64_t>(static_cast<std::uint64_t>(params.for_base) + field);
  }
  return out;
}

std::vector<std::int64_t> prefix_sum(std::span<const std::int64_t> deltas, std::int64_t base) {
  std::vector<std::int64_t> out(deltas.size());
  std::int64_t acc = base;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (i > 0 && __builtin_add_overflow(acc, deltas[i], &acc)) {
      throw Error(ErrorCode::ArithmeticOverflow, "prefix sum overflows", i);
    }
    out[i] = acc;
  }
  return out;
}

std::vector<std::int64_t> rle_expand(std::span<const std::int64_t> values, std::span<const std::int64_t> counts) {
  std::vector<std::int64_t> out;
  for (std::size_t g = 0; g < values.size(); ++g) {
    if (counts[g] < 0) throw Error(ErrorCode::CountOverflow, "negative count", g);
    out.insert(out.end(), static_cast<std::size_t>(counts[g]), values[g]);
  }
  return out;
}

std::vector<std::int64_t> deltastride_expand(std::span<const std::int64_t> starts,
                                             std::span<const std::int64_t> strides,
                                             std::span<const std::int64_t> counts) {
  std::vector<std::int64_t> out;
  for (std::size_t g = 0; g < starts.size(); ++g) {
    if (counts[g] < 0) throw Error(ErrorCode::CountOverflow, "negative count", g);
    auto v = static_cast<std::uint64_t>(starts[g]);
    for (std::int64_t j = 0; j < counts[g]; ++j) {
      out.push_back(static_cast<std::int64_t>(v));
      v += static_cast<std::uint64_t>(strides[g]);
    }
  }
  return out;
}

Bytes ans_decode(ByteSpan payload, const AnsParams& params) {
  Bytes out(params.input_size);
  const AnsDecoder dec(params);
  for (std::uint64_t c = 0; c < params.n_chunks(); ++c) {
    const auto in = payload.subspan(params.chunk_offsets[c], params.chunk_offsets[c + 1] - params.chunk_offsets[c]);
    const auto begin = c * params.chunk_size;
    const auto len = std::min<std::uint64_t>(params.chunk_size, params.input_size - begin);
    dec.decode_chunk(in, std::span<std::uint8_t>(out).subspan(begin, len), c);
  }
  return out;
}

namespace {

std::vector<std::int64_t> ints(const TypedColumn& c) { return c.to_int64(); }

class Decoder {
 public:
  explicit Decoder(const CompressedArtifact& a) : a_(a) {}

  TypedColumn node(const CodecNode& n, ElementType type, std::uint64_t count) {
    const auto i64 = ElementType::int64();
    const auto& kids = n.children;
    switch (n.codec) {
      case CodecId::Raw: {
        const auto& bytes = a_.streams.at(next_stream_++).bytes;
        if (type.is_fixed()) return TypedColumn(type, count, bytes);
        std::vector<std::uint64_t> offsets(count + 1);
        for (std::uint64_t i = 0; i <= count; ++i) offsets[i] = load_le<std::uint64_t>(bytes.data() + 8 * i);
        return TypedColumn(type, count, Bytes(bytes.begin() + static_cast<std::ptrdiff_t>(8 * (count + 1)), bytes.end()),
                           std::move(offsets));
      }
      case CodecId::BitPack: {
        const auto p = BitPackParams::from_record(n.params);
        const auto packed = node(kids[0], ElementType::fixed_bytes(1), (count * p.bit_width + 7) / 8);
        return TypedColumn::from_int64(bitunpack(packed.payload(), p, count));
      }
      case CodecId::Delta: {
        const auto p = DeltaParams::from_record(n.params);
        return TypedColumn::from_int64(prefix_sum(ints(node(kids[0], i64, count)), p.base));
      }
      case CodecId::RLE: {
        const auto p = RleParams::from_record(n.params);
        const auto v = ints(node(kids[0], i64, p.n_runs));
        const auto c = ints(node(kids[1], i64, p.n_runs));
        return TypedColumn::from_int64(rle_expand(v, c));
      }
      case CodecId::DeltaStride: {
        const auto p = DeltaStrideParams::from_record(n.params);
        const auto starts = ints(node(kids[0], i64, p.n_runs));
        const auto counts = ints(node(kids[1], i64, p.n_runs));
        const auto strides = ints(node(kids[2], i64, p.n_runs));
        return TypedColumn::from_int64(deltastride_expand(starts, strides, counts));
      }
      case CodecId::Dict: {
        const auto p = DictParams::from_record(n.params);
        const auto dict = node(kids[0], type, p.dict_count);
        const auto idx = ints(node(kids[1], i64, count));
        const auto w = type.fixed_width();
        Bytes out;
        out.reserve(count * w);
        for (std::size_t i = 0; i < idx.size(); ++i) {
          if (idx[i] < 0 || static_cast<std::uint64_t>(idx[i]) >= p.dict_count) {
            throw Error(ErrorCode::IndexOutOfDictionary, "index out of dictionary", i);
          }
          const auto* e = dict.payload().data() + static_cast<std::size_t>(idx[i]) * w;
          out.insert(out.end(), e, e + w);
        }
        return TypedColumn(type, count, std::move(out));
      }
      case CodecId::Float2Int: {
        const auto p = Float2IntParams::from_record(n.params);
        const auto v = ints(node(kids[0], i64, count));
        std::vector<double> out(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) out[i] = float2int_value(v[i], p.decimal_scale);
        return TypedColumn::from_float64(out);
      }
      case CodecId::StrDict: {
        const auto p = StrDictParams::from_record(n.params);
        const auto idx = ints(node(kids[0], i64, p.occurrences));
        const auto counts = ints(node(kids[1], i64, count));
        std::vector<std::string> out(count);
        std::size_t k = 0;
        for (std::size_t s = 0; s < count; ++s) {
          for (std::int64_t t = 0; t < counts[s]; ++t, ++k) {
            if (k >= idx.size()) throw Error(ErrorCode::CountOverflow, "token counts exceed occurrences", s);
            const auto id = idx[k];
            if (id < 0 || static_cast<std::uint64_t>(id) >= p.dictionary.size()) {
              throw Error(ErrorCode::IndexOutOfDictionary, "token id out of dictionary", k);
            }
            out[s] += p.dictionary[static_cast<std::size_t>(id)];
          }
        }
        return TypedColumn::from_strings(out);
      }
      case CodecId::ANS: {
        const auto p = AnsParams::from_record(n.params);
        const auto payload_size = p.chunk_offsets.empty() ? 0 : p.chunk_offsets.back();
        const auto payload = node(kids[0], ElementType::fixed_bytes(1), payload_size);
        auto bytes = ans_decode(payload.payload(), p);
        return TypedColumn(type, count, std::move(bytes));
      }
    }
    throw Error(ErrorCode::BadTag, "unknown codec");
  }

 private:
  const CompressedArtifact& a_;
  std::size_t next_stream_ = 0;
};

}  // namespace

TypedColumn decode(const CompressedArtifact& artifact) {
  validate_artifact(artifact);
  Decoder d(artifact);
  auto col = d.node(artifact.root, artifact.original_type, artifact.original_count);
  if (column_checksum(col) != artifact.checksum) throw Error(ErrorCode::ChecksumMismatch, "checksum mismatch");
  return col;
}

}  // namespace patternpress::reference
