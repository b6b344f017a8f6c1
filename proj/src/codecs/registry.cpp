#include "patternpress/codecs/registry.hpp"

#include <array>
#include <cctype>
#include <string>

namespace patternpress::codecs {

namespace {

using R = StreamRole;

const std::array<CodecInfo, kCodecCount>& table() {
  static const std::array<CodecInfo, kCodecCount> t = {{
      {CodecId::BitPack, "Bit-packing", {"bitpacking", "bitpack", "bitpacked", "for"}, 1, 1, 0, {R::Packed}, {},
       Pattern::FullyParallel},
      {CodecId::Delta, "Delta encoding", {"deltaencoding", "delta"}, 1, 1, 0, {R::Values}, {}, std::nullopt},
      {CodecId::RLE, "RLE", {"rle", "runlength", "runlengthencoding"}, 2, 2, 0, {R::Values, R::Counts}, {},
       Pattern::GroupParallel},
      {CodecId::DeltaStride, "DeltaStride", {"deltastride"}, 3, 2, 0, {R::Values, R::Counts, R::Aux}, {},
       Pattern::GroupParallel},
      {CodecId::Dict, "Dictionary encoding", {"dictionaryencoding", "dictionary", "dict"}, 2, 2, 1,
       {R::Dictionary, R::Indices}, {}, Pattern::FullyParallel},
      {CodecId::Float2Int, "Float2Int", {"float2int"}, 1, 1, 0, {R::Values}, {}, Pattern::FullyParallel},
      {CodecId::StrDict, "String-dictionary", {"stringdictionary", "stringdict", "strdict"}, 2, 2, 0,
       {R::Indices, R::Counts}, {}, Pattern::GroupParallel},
      {CodecId::ANS, "ANS", {"ans", "rans"}, 1, 1, 0, {R::EntropyPayload}, {"chunk_size", "table_log"},
       Pattern::NonParallel},
      {CodecId::Raw, "Raw", {"raw", "plain", "none"}, 0, 0, 0, {}, {}, std::nullopt},
  }};
  return t;
}

}  // namespace

const CodecInfo& codec_info(CodecId id) { return table().at(static_cast<std::size_t>(id)); }

std::string normalize_codec_name(std::string_view name) {
  std::string out;
  out.reserve(name.size());
  for (char c : name) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == '-' || c == '_') continue;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

std::optional<CodecId> find_codec(std::string_view name) {
  const auto key = normalize_codec_name(name);
  for (const auto& info : table()) {
    for (auto alias : info.aliases) {
      if (alias == key) return info.id;
    }
  }
  return std::nullopt;
}

}  // namespace patternpress::codecs
