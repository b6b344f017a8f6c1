#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "patternpress/datamodel.hpp"
#include "patternpress/device.hpp"

namespace patternpress::codecs {

/// Static description of a codec as seen by the pipeline language.
struct CodecInfo {
  CodecId id;
  std::string_view name;                      // canonical spelling, used by the renderer
  std::vector<std::string_view> aliases;      // normalized: lowercase, no spaces/'-'/'_'
  std::size_t arity = 0;                      // output streams
  std::size_t required_outputs = 0;           // a fanout must bind at least this many
  std::size_t primary_output = 0;             // bound by "Codec | node"
  std::vector<StreamRole> output_roles;
  std::vector<std::string_view> option_keys;  // accepted "(k=v)" keys
  std::optional<Pattern> decode_pattern;      // the kernel family its decoder uses
};

const CodecInfo& codec_info(CodecId id);

/// Lowercases and drops whitespace, '-' and '_'.
std::string normalize_codec_name(std::string_view name);

/// Looks up a codec by any alias, after normalization.
std::optional<CodecId> find_codec(std::string_view name);

}  // namespace patternpress::codecs
