#include <charconv>

#include "patternpress/codecs/ans.hpp"
#include "patternpress/codecs/bitpack.hpp"
#include "patternpress/codecs/delta.hpp"
#include "patternpress/codecs/dict.hpp"
#include "patternpress/codecs/registry.hpp"
#include "patternpress/plan.hpp"

namespace patternpress {

namespace {

using namespace codecs;

TypedColumn int_column(std::vector<std::int64_t> v) { return TypedColumn::from_int64(v); }

TypedColumn byte_column(Bytes b) {
  const auto n = b.size();
  return TypedColumn(ElementType::fixed_bytes(1), n, std::move(b));
}

std::uint64_t parse_option(const PipelineNode& spec, std::string_view key, std::uint64_t fallback) {
  const auto text = option_or(spec, key, "");
  if (text.empty()) return fallback;
  std::uint64_t v = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || end != text.data() + text.size()) {
    throw Error(ErrorCode::InvalidArgument, "option " + std::string(key) + "=" + text + " is not an integer");
  }
  return v;
}

void require(const TypedColumn& col, bool ok, CodecId id, std::string_view wanted) {
  if (!ok) {
    throw Error(ErrorCode::TypeMismatch, std::string(codec_info(id).name) + " needs " + std::string(wanted) +
                                             " input, got " + to_string(col.type()));
  }
}

class Encoder {
 public:
  explicit Encoder(std::vector<ByteStream>& streams) : streams_(streams) {}

  CodecNode encode(const PipelineNode& spec, const TypedColumn& col, StreamRole role, const std::string& path) {
    CodecNode node;
    node.codec = spec.codec;
    const auto here = path.empty() ? std::string(codec_info(spec.codec).name)
                                   : path + " / " + std::string(codec_info(spec.codec).name);
    if (spec.codec == CodecId::Raw) {
      streams_.push_back({role, raw_stream_bytes(col)});
      return node;
    }

    std::vector<TypedColumn> outputs;
    try {
      outputs = apply(spec, col, node);
    } catch (const Error& e) {
      throw e.with_context(here);
    }
    const auto kids = bound_children(spec);
    const auto& roles = codec_info(spec.codec).output_roles;
    for (std::size_t i = 0; i < kids.size(); ++i) {
      node.children.push_back(encode(kids[i], outputs[i], roles[i], here));
    }
    return node;
  }

 private:
  std::vector<TypedColumn> apply(const PipelineNode& spec, const TypedColumn& col, CodecNode& node) {
    const auto kind = col.type().kind;
    switch (spec.codec) {
      case CodecId::BitPack: {
        require(col, kind == ElementKind::Int64, spec.codec, "Int64");
        auto bp = bitpack_encode(col.to_int64());
        node.params = bp.params.to_record();
        std::vector<TypedColumn> out;
        out.push_back(byte_column(std::move(bp.packed)));
        return out;
      }
      case CodecId::Delta: {
        require(col, kind == ElementKind::Int64, spec.codec, "Int64");
        auto d = delta_encode(col.to_int64());
        node.params = d.params.to_record();
        std::vector<TypedColumn> out;
        out.push_back(int_column(std::move(d.deltas)));
        return out;
      }
      case CodecId::RLE: {
        require(col, kind == ElementKind::Int64, spec.codec, "Int64");
        auto r = rle_encode(col.to_int64());
        node.params = RleParams{r.values.size()}.to_record();
        std::vector<TypedColumn> out;
        out.push_back(int_column(std::move(r.values)));
        out.push_back(int_column(std::move(r.counts)));
        return out;
      }
      case CodecId::DeltaStride: {
        require(col, kind == ElementKind::Int64, spec.codec, "Int64");
        auto r = deltastride_encode(col.to_int64());
        node.params = DeltaStrideParams{r.starts.size()}.to_record();
        std::vector<TypedColumn> out;
        out.push_back(int_column(std::move(r.starts)));
        out.push_back(int_column(std::move(r.counts)));
        out.push_back(int_column(std::move(r.strides)));
        return out;
      }
      case CodecId::Dict: {
        require(col, col.type().is_fixed(), spec.codec, "fixed-width");
        auto d = dict_encode(col);
        node.params = DictParams{d.dictionary.count()}.to_record();
        std::vector<TypedColumn> out;
        out.push_back(std::move(d.dictionary));
        out.push_back(int_column(std::move(d.indices)));
        return out;
      }
      case CodecId::Float2Int: {
        require(col, kind == ElementKind::Float64, spec.codec, "Float64");
        auto f = float2int_encode(col.to_float64());
        node.params = f.params.to_record();
        std::vector<TypedColumn> out;
        out.push_back(int_column(std::move(f.ints)));
        return out;
      }
      case CodecId::StrDict: {
        require(col, kind == ElementKind::VarBytes, spec.codec, "VarBytes");
        auto s = strdict_encode(col);
        node.params = s.params.to_record();
        std::vector<TypedColumn> out;
        out.push_back(int_column(std::move(s.indices)));
        out.push_back(int_column(std::move(s.token_counts)));
        return out;
      }
      case CodecId::ANS: {
        require(col, col.type().is_fixed(), spec.codec, "fixed-width");
        const auto chunk = parse_option(spec, "chunk_size", kAnsDefaultChunkSize);
        const auto table_log = parse_option(spec, "table_log", kAnsDefaultTableLog);
        if (chunk > (std::uint64_t{1} << 30)) throw Error(ErrorCode::InvalidArgument, "chunk_size above 2^30");
        auto e = ans_encode(col.payload(), static_cast<std::uint32_t>(chunk), static_cast<unsigned>(table_log));
        node.params = e.params.to_record();
        std::vector<TypedColumn> out;
        out.push_back(byte_column(std::move(e.payload)));
        return out;
      }
      case CodecId::Raw: break;
    }
    return {};
  }

  std::vector<ByteStream>& streams_;
};

}  // namespace

Bytes raw_stream_bytes(const TypedColumn& col) {
  if (col.type().is_fixed()) return col.payload();
  Bytes out;
  ByteWriter w(out);
  for (auto o : col.offsets()) w.put(o);
  w.put_bytes(col.payload());
  return out;
}

CompressedArtifact compile_encode(const PipelineSpec& spec, const TypedColumn& col) {
  CompressedArtifact a;
  a.original_type = col.type();
  a.original_count = col.count();
  a.checksum = column_checksum(col);
  Encoder enc(a.streams);
  a.root = enc.encode(spec, col, StreamRole::Values, "");
  return a;
}

}  // namespace patternpress
