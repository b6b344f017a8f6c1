#include "patternpress/pipeline.hpp"

#include <algorithm>
#include <cctype>

#include "patternpress/codecs/ans.hpp"
#include "patternpress/codecs/registry.hpp"

namespace patternpress {

namespace {

using codecs::codec_info;

bool is_structural(char c) {
  return c == '|' || c == '[' || c == ']' || c == ',' || c == '(' || c == ')' || c == '=';
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void arity_error(CodecId id, std::string_view expected, std::size_t got) {
  throw Error(ErrorCode::ArityError, std::string(codec_info(id).name) + " takes " + std::string(expected) +
                                         " outputs, got " + std::to_string(got));
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  PipelineNode parse() {
    auto node = parse_node();
    skip_ws();
    if (pos_ != text_.size()) fail("end of input");
    return node;
  }

 private:
  [[noreturn]] void fail(std::string_view expected) const {
    const std::string found = pos_ < text_.size() ? "'" + std::string(1, text_[pos_]) + "'" : "end of input";
    throw Error(ErrorCode::ParseError, "expected " + std::string(expected) + ", found " + found, pos_);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::string word() {
    skip_ws();
    const auto start = pos_;
    while (pos_ < text_.size() && !is_structural(text_[pos_])) ++pos_;
    return trim(text_.substr(start, pos_ - start));
  }

  PipelineNode parse_node() {
    skip_ws();
    const auto at = pos_;
    const auto name = word();
    if (name.empty()) {
      pos_ = at;
      fail("codec name");
    }
    const auto id = codecs::find_codec(name);
    if (!id) throw Error(ErrorCode::UnknownCodec, "unknown codec '" + name + "'", at);
    PipelineNode node;
    node.codec = *id;
    if (accept('(')) parse_options(node);

    const auto& info = codec_info(node.codec);
    if (!accept('|')) return node;
    if (info.arity == 0) arity_error(node.codec, "no", 1);
    if (accept('[')) {
      node.shape = PipelineNode::Shape::Fanout;
      node.children.push_back(parse_node());
      while (true) {
        if (accept(',')) {
          node.children.push_back(parse_node());
        } else if (accept(']')) {
          break;
        } else {
          skip_ws();
          fail("']' or ','");
        }
      }
      const auto got = node.children.size();
      if (got < info.required_outputs || got > info.arity) {
        const auto expected = info.required_outputs == info.arity
                                  ? std::to_string(info.arity)
                                  : std::to_string(info.required_outputs) + " to " + std::to_string(info.arity);
        arity_error(node.codec, expected, got);
      }
    } else {
      node.shape = PipelineNode::Shape::Seq;
      node.children.push_back(parse_node());
    }
    return node;
  }

  void parse_options(PipelineNode& node) {
    const auto& keys = codec_info(node.codec).option_keys;
    if (accept(')')) return;
    do {
      skip_ws();
      const auto at = pos_;
      auto key = word();
      std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
      if (key.empty()) fail("option name");
      if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
        pos_ = at;
        fail("an option of " + std::string(codec_info(node.codec).name));
      }
      if (!accept('=')) fail("'='");
      auto value = word();
      if (value.empty()) fail("option value");
      node.options.emplace_back(std::move(key), std::move(value));
    } while (accept(','));
    if (!accept(')')) {
      skip_ws();
      fail("')' or ','");
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string render_codec(const PipelineNode& node) {
  std::string s(codec_info(node.codec).name);
  if (!node.options.empty()) {
    s += '(';
    for (std::size_t i = 0; i < node.options.size(); ++i) {
      if (i) s += ", ";
      s += node.options[i].first + "=" + node.options[i].second;
    }
    s += ')';
  }
  return s;
}

}  // namespace

PipelineSpec parse_pipeline(std::string_view text) { return Parser(text).parse(); }

std::string render_pipeline(const PipelineSpec& spec) {
  auto s = render_codec(spec);
  switch (spec.shape) {
    case PipelineNode::Shape::Leaf: return s;
    case PipelineNode::Shape::Seq: return s + " | " + render_pipeline(spec.children.front());
    case PipelineNode::Shape::Fanout: {
      s += " | [";
      for (std::size_t i = 0; i < spec.children.size(); ++i) {
        if (i) s += ", ";
        s += render_pipeline(spec.children[i]);
      }
      return s + "]";
    }
  }
  return s;
}

std::vector<PipelineNode> bound_children(const PipelineNode& node) {
  const auto& info = codec_info(node.codec);
  std::vector<PipelineNode> out(info.arity);
  switch (node.shape) {
    case PipelineNode::Shape::Leaf: break;
    case PipelineNode::Shape::Seq: out.at(info.primary_output) = node.children.front(); break;
    case PipelineNode::Shape::Fanout:
      for (std::size_t i = 0; i < node.children.size(); ++i) out.at(i) = node.children[i];
      break;
  }
  return out;
}

std::string option_or(const PipelineNode& node, std::string_view key, std::string_view fallback) {
  for (const auto& [k, v] : node.options) {
    if (k == key) return v;
  }
  return std::string(fallback);
}

PipelineSpec pipeline_from_tree(const CodecNode& tree) {
  PipelineNode node;
  node.codec = tree.codec;
  if (tree.codec == CodecId::ANS) {
    const auto p = codecs::AnsParams::from_record(tree.params);
    if (p.chunk_size != codecs::kAnsDefaultChunkSize) node.options.emplace_back("chunk_size", std::to_string(p.chunk_size));
    if (p.table_log != codecs::kAnsDefaultTableLog) node.options.emplace_back("table_log", std::to_string(p.table_log));
  }
  const auto& info = codec_info(tree.codec);
  std::vector<PipelineNode> kids;
  kids.reserve(tree.children.size());
  for (const auto& c : tree.children) kids.push_back(pipeline_from_tree(c));

  std::size_t last = 0;  // one past the last non-Raw child
  std::size_t non_raw = 0;
  for (std::size_t i = 0; i < kids.size(); ++i) {
    if (kids[i].codec != CodecId::Raw) {
      last = i + 1;
      ++non_raw;
    }
  }
  if (non_raw == 0) return node;
  if (non_raw == 1 && kids[info.primary_output].codec != CodecId::Raw) {
    node.shape = PipelineNode::Shape::Seq;
    node.children.push_back(std::move(kids[info.primary_output]));
    return node;
  }
  node.shape = PipelineNode::Shape::Fanout;
  kids.resize(std::max(last, info.required_outputs));
  node.children = std::move(kids);
  return node;
}

const std::vector<std::pair<std::string, std::string>>& tpch_pipelines() {
  static const std::vector<std::pair<std::string, std::string>> rows = {
      {"L_PARTKEY", "Bit-packing"},
      {"L_SHIPDATE", "Dictionary encoding | Bit-packing"},
      {"L_DISCOUNT", "Float2Int | Bit-packing"},
      {"L_ORDERKEY",
       "RLE | [DeltaStride | [Delta encoding | RLE | [Bit-packing, Bit-packing], Bit-packing], Bit-packing]"},
      {"O_ORDERKEY", "DeltaStride | [Delta encoding | RLE | [Bit-packing, Bit-packing], Bit-packing]"},
      {"PS_PARTKEY", "RLE | [DeltaStride, RLE]"},
      {"PS_SUPPKEY", "Delta encoding | Dictionary encoding | Bit-packing | Dictionary encoding | Bit-packing"},
      {"O_SHIPPRIORITY", "RLE"},
      {"L_RETURNFLAG", "ANS"},
      {"O_COMMENT", "String-dictionary | Bit-packing | ANS"},
  };
  return rows;
}

}  // namespace patternpress
