#include "patternpress/datamodel.hpp"

namespace patternpress {

std::string to_string(ElementType t) {
  switch (t.kind) {
    case ElementKind::Int64: return "Int64";
    case ElementKind::Float64: return "Float64";
    case ElementKind::FixedBytes: return "FixedBytes(" + std::to_string(t.width) + ")";
    case ElementKind::VarBytes: return "VarBytes";
  }
  return "?";
}

TypedColumn::TypedColumn(ElementType type, std::size_t count, Bytes payload,
                         std::vector<std::uint64_t> offsets)
    : type_(type), count_(count), payload_(std::move(payload)), offsets_(std::move(offsets)) {
  if (type_.kind == ElementKind::FixedBytes && type_.width == 0) {
    throw Error(ErrorCode::InvalidArgument, "FixedBytes width must be positive");
  }
  if (type_.kind != ElementKind::FixedBytes) type_.width = 0;

  if (type_.is_fixed()) {
    if (!offsets_.empty()) throw Error(ErrorCode::InvalidArgument, "offsets given for a fixed-width column");
    if (payload_.size() != type_.fixed_width() * count_) {
      throw Error(ErrorCode::InvalidArgument,
                  "payload holds " + std::to_string(payload_.size()) + " bytes, expected " +
                      std::to_string(type_.fixed_width() * count_));
    }
    return;
  }
  if (offsets_.size() != count_ + 1) {
    throw Error(ErrorCode::InvalidArgument, "VarBytes column needs count+1 offsets");
  }
  if (offsets_.front() != 0 || offsets_.back() != payload_.size()) {
    throw Error(ErrorCode::InvalidArgument, "offsets must span [0, payload length]");
  }
  for (std::size_t i = 0; i < count_; ++i) {
    if (offsets_[i + 1] < offsets_[i]) {
      throw Error(ErrorCode::InvalidArgument, "offsets decrease", i + 1);
    }
  }
}

TypedColumn TypedColumn::from_int64(std::span<const std::int64_t> values) {
  Bytes b(values.size() * 8);
  if (!values.empty()) std::memcpy(b.data(), values.data(), b.size());
  return TypedColumn(ElementType::int64(), values.size(), std::move(b));
}

TypedColumn TypedColumn::from_float64(std::span<const double> values) {
  Bytes b(values.size() * 8);
  if (!values.empty()) std::memcpy(b.data(), values.data(), b.size());
  return TypedColumn(ElementType::float64(), values.size(), std::move(b));
}

TypedColumn TypedColumn::from_strings(std::span<const std::string> values) {
  Bytes b;
  std::vector<std::uint64_t> offs;
  offs.reserve(values.size() + 1);
  offs.push_back(0);
  for (const auto& s : values) {
    b.insert(b.end(), s.begin(), s.end());
    offs.push_back(b.size());
  }
  return TypedColumn(ElementType::var_bytes(), values.size(), std::move(b), std::move(offs));
}

std::string_view TypedColumn::string_at(std::size_t i) const {
  return {reinterpret_cast<const char*>(payload_.data()) + offsets_[i], offsets_[i + 1] - offsets_[i]};
}

std::vector<std::int64_t> TypedColumn::to_int64() const {
  if (type_.kind != ElementKind::Int64) throw Error(ErrorCode::TypeMismatch, "column is " + to_string(type_));
  std::vector<std::int64_t> v(count_);
  if (count_ != 0) std::memcpy(v.data(), payload_.data(), payload_.size());
  return v;
}

std::vector<double> TypedColumn::to_float64() const {
  if (type_.kind != ElementKind::Float64) throw Error(ErrorCode::TypeMismatch, "column is " + to_string(type_));
  std::vector<double> v(count_);
  if (count_ != 0) std::memcpy(v.data(), payload_.data(), payload_.size());
  return v;
}

std::vector<std::string> TypedColumn::to_strings() const {
  if (type_.kind != ElementKind::VarBytes) throw Error(ErrorCode::TypeMismatch, "column is " + to_string(type_));
  std::vector<std::string> v;
  v.reserve(count_);
  for (std::size_t i = 0; i < count_; ++i) v.emplace_back(string_at(i));
  return v;
}

std::size_t TypedColumn::plain_size() const noexcept {
  return payload_.size() + (type_.kind == ElementKind::VarBytes ? offsets_.size() * 8 : 0);
}

std::string_view to_string(StreamRole role) {
  switch (role) {
    case StreamRole::Values: return "Values";
    case StreamRole::Counts: return "Counts";
    case StreamRole::Indices: return "Indices";
    case StreamRole::Dictionary: return "Dictionary";
    case StreamRole::Packed: return "Packed";
    case StreamRole::EntropyPayload: return "EntropyPayload";
    case StreamRole::Offsets: return "Offsets";
    case StreamRole::Aux: return "Aux";
  }
  return "?";
}

std::size_t codec_arity(CodecId id) noexcept {
  switch (id) {
    case CodecId::BitPack:
    case CodecId::Delta:
    case CodecId::Float2Int:
    case CodecId::ANS: return 1;
    case CodecId::RLE:
    case CodecId::Dict:
    case CodecId::StrDict: return 2;
    case CodecId::DeltaStride: return 3;
    case CodecId::Raw: return 0;
  }
  return 0;
}

std::size_t CodecNode::raw_leaf_count() const {
  if (codec == CodecId::Raw) return 1;
  std::size_t n = 0;
  for (const auto& c : children) n += c.raw_leaf_count();
  return n;
}

namespace {

void check_node(const CodecNode& node, std::size_t depth) {
  if (static_cast<std::uint8_t>(node.codec) >= kCodecCount) {
    throw Error(ErrorCode::BadTag, "unknown codec tag " + std::to_string(static_cast<int>(node.codec)));
  }
  if (depth > 64) throw Error(ErrorCode::ArityMismatch, "codec tree deeper than 64 levels");
  if (node.children.size() != codec_arity(node.codec)) {
    throw Error(ErrorCode::ArityMismatch,
                "codec tag " + std::to_string(static_cast<int>(node.codec)) + " has " +
                    std::to_string(node.children.size()) + " children, expected " +
                    std::to_string(codec_arity(node.codec)));
  }
  for (const auto& c : node.children) check_node(c, depth + 1);
}

}  // namespace

void validate_artifact(const CompressedArtifact& a) {
  check_node(a.root, 0);
  const auto leaves = a.root.raw_leaf_count();
  if (leaves != a.streams.size()) {
    throw Error(ErrorCode::ArityMismatch, std::to_string(leaves) + " Raw leaves but " +
                                              std::to_string(a.streams.size()) + " streams");
  }
  if (a.original_type.kind == ElementKind::FixedBytes && a.original_type.width == 0) {
    throw Error(ErrorCode::BadTag, "FixedBytes width 0");
  }
}

std::uint64_t checksum64(ByteSpan payload, std::uint64_t state) noexcept {
  for (auto b : payload) {
    state ^= b;
    state *= 1099511628211ULL;
  }
  return state;
}

std::uint64_t checksum64(ByteSpan payload) noexcept {
  return checksum64(payload, 14695981039346656037ULL);
}

std::uint64_t column_checksum(const TypedColumn& col) noexcept {
  auto h = checksum64(col.payload());
  if (col.type().kind == ElementKind::VarBytes) {
    const auto& o = col.offsets();
    h = checksum64({reinterpret_cast<const std::uint8_t*>(o.data()), o.size() * 8}, h);
  }
  return h;
}

}  // namespace patternpress
