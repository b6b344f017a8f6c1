#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "patternpress/datamodel.hpp"

namespace patternpress {

/// Pipeline text:
///
///   pipeline := node EOF
///   node     := codec | codec "|" node | codec "|" "[" node ("," node)* "]"
///   codec    := name [ "(" key "=" value ("," key "=" value)* ")" ]
///
/// Codec names are case- and whitespace-insensitive ("Bit-packing",
/// "bitpack", "Dictionary encoding", ...).
struct PipelineNode {
  enum class Shape : std::uint8_t { Leaf, Seq, Fanout };

  CodecId codec = CodecId::Raw;
  std::vector<std::pair<std::string, std::string>> options;
  Shape shape = Shape::Leaf;
  std::vector<PipelineNode> children;  // 1 for Seq, >= 1 for Fanout

  friend bool operator==(const PipelineNode&, const PipelineNode&) = default;
};

using PipelineSpec = PipelineNode;

/// Throws ParseError(position), UnknownCodec, ArityError.
PipelineSpec parse_pipeline(std::string_view text);

/// Canonical spelling; parse_pipeline(render_pipeline(p)) == p.
std::string render_pipeline(const PipelineSpec& spec);

/// Recovers pipeline text from an artifact's codec tree. Outputs bound to Raw
/// are elided where the grammar allows.
PipelineSpec pipeline_from_tree(const CodecNode& node);

/// Expands a node into one child spec per codec output (Raw where unbound).
std::vector<PipelineNode> bound_children(const PipelineNode& node);

/// Value of option `key`, or `fallback`.
std::string option_or(const PipelineNode& node, std::string_view key, std::string_view fallback);

/// Pipelines for the TPC-H column shapes, keyed by column name.
/// L_ORDERKEY and PS_PARTKEY use the balanced reading of their rows.
const std::vector<std::pair<std::string, std::string>>& tpch_pipelines();

}  // namespace patternpress
