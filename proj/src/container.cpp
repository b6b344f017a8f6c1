#include "patternpress/container.hpp"

#include <algorithm>

namespace patternpress {

namespace {

constexpr std::size_t kMaxDepth = 64;

void put_node(ByteWriter& w, const CodecNode& node) {
  w.put(static_cast<std::uint8_t>(node.codec));
  w.put(static_cast<std::uint32_t>(node.params.size()));
  w.put_bytes(node.params);
  w.put(static_cast<std::uint8_t>(node.children.size()));
  for (const auto& c : node.children) put_node(w, c);
}

std::size_t node_size(const CodecNode& node) {
  std::size_t n = 1 + 4 + node.params.size() + 1;
  for (const auto& c : node.children) n += node_size(c);
  return n;
}

CodecNode get_node(ByteReader& r, std::size_t depth) {
  if (depth > kMaxDepth) {
    throw Error(ErrorCode::ArityMismatch, "codec tree deeper than 64 levels", r.position());
  }
  CodecNode node;
  const auto tag_at = r.position();
  const auto tag = r.get<std::uint8_t>("codec tag");
  if (tag >= kCodecCount) throw Error(ErrorCode::BadTag, "unknown codec tag " + std::to_string(tag), tag_at);
  node.codec = static_cast<CodecId>(tag);
  const auto plen = r.get<std::uint32_t>("params length");
  auto params = r.get_bytes(plen, "params");
  node.params.assign(params.begin(), params.end());
  const auto kids_at = r.position();
  const auto kids = r.get<std::uint8_t>("child count");
  if (kids != codec_arity(node.codec)) {
    throw Error(ErrorCode::ArityMismatch,
                "codec tag " + std::to_string(tag) + " declares " + std::to_string(kids) +
                    " children, expected " + std::to_string(codec_arity(node.codec)),
                kids_at);
  }
  node.children.reserve(kids);
  for (unsigned i = 0; i < kids; ++i) node.children.push_back(get_node(r, depth + 1));
  return node;
}

}  // namespace

Bytes serialize_artifact(const CompressedArtifact& a) {
  validate_artifact(a);
  Bytes out(kContainerMagic.begin(), kContainerMagic.end());
  out.reserve(compressed_size(a));
  ByteWriter w(out);
  w.put(kContainerVersion);
  w.put(static_cast<std::uint8_t>(a.original_type.kind));
  if (a.original_type.kind == ElementKind::FixedBytes) w.put(a.original_type.width);
  w.put(a.original_count);
  w.put(a.checksum);
  put_node(w, a.root);
  w.put(static_cast<std::uint32_t>(a.streams.size()));
  for (const auto& s : a.streams) {
    w.put(static_cast<std::uint8_t>(s.role));
    w.put(static_cast<std::uint64_t>(s.bytes.size()));
    w.put_bytes(s.bytes);
  }
  return out;
}

CompressedArtifact deserialize_artifact(ByteSpan bytes) {
  ByteReader r(bytes);
  auto magic = r.get_bytes(4, "magic");
  if (!std::equal(magic.begin(), magic.end(), kContainerMagic.begin())) {
    throw Error(ErrorCode::BadMagic, "not a ZDMV container", 0);
  }
  const auto version = r.get<std::uint16_t>("version");
  if (version != kContainerVersion) {
    throw Error(ErrorCode::UnsupportedVersion, "format version " + std::to_string(version), 4);
  }

  CompressedArtifact a;
  const auto type_at = r.position();
  const auto kind = r.get<std::uint8_t>("type tag");
  if (kind > static_cast<std::uint8_t>(ElementKind::VarBytes)) {
    throw Error(ErrorCode::BadTag, "unknown element type tag " + std::to_string(kind), type_at);
  }
  a.original_type.kind = static_cast<ElementKind>(kind);
  if (a.original_type.kind == ElementKind::FixedBytes) {
    const auto width_at = r.position();
    a.original_type.width = r.get<std::uint32_t>("fixed width");
    if (a.original_type.width == 0) throw Error(ErrorCode::BadTag, "FixedBytes width 0", width_at);
  }
  a.original_count = r.get<std::uint64_t>("original count");
  a.checksum = r.get<std::uint64_t>("checksum");
  a.root = get_node(r, 0);

  const auto count_at = r.position();
  const auto n_streams = r.get<std::uint32_t>("stream count");
  const auto leaves = a.root.raw_leaf_count();
  if (n_streams != leaves) {
    throw Error(ErrorCode::ArityMismatch,
                std::to_string(n_streams) + " streams for " + std::to_string(leaves) + " Raw leaves",
                count_at);
  }
  a.streams.reserve(n_streams);
  for (std::uint32_t i = 0; i < n_streams; ++i) {
    ByteStream s;
    const auto role_at = r.position();
    const auto role = r.get<std::uint8_t>("stream role");
    if (role >= kStreamRoleCount) {
      throw Error(ErrorCode::BadTag, "unknown stream role " + std::to_string(role), role_at);
    }
    s.role = static_cast<StreamRole>(role);
    const auto len = r.get<std::uint64_t>("stream length");
    if (len > r.remaining()) {
      throw Error(ErrorCode::TruncatedInput, "input ends inside field 'stream bytes'", r.position());
    }
    auto body = r.get_bytes(static_cast<std::size_t>(len), "stream bytes");
    s.bytes.assign(body.begin(), body.end());
    a.streams.push_back(std::move(s));
  }
  if (!r.done()) {
    throw Error(ErrorCode::TrailingBytes, std::to_string(r.remaining()) + " bytes after the last stream",
                r.position());
  }
  return a;
}

std::size_t compressed_size(const CompressedArtifact& a) {
  std::size_t n = 4 + 2 + 1 + (a.original_type.kind == ElementKind::FixedBytes ? 4 : 0) + 8 + 8;
  n += node_size(a.root);
  n += 4;
  for (const auto& s : a.streams) n += 1 + 8 + s.bytes.size();
  return n;
}

}  // namespace patternpress
