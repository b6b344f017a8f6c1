#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "patternpress/bytes.hpp"

namespace patternpress {

enum class ElementKind : std::uint8_t { Int64 = 0, Float64 = 1, FixedBytes = 2, VarBytes = 3 };

struct ElementType {
  ElementKind kind = ElementKind::Int64;
  std::uint32_t width = 0;  // FixedBytes only

  static constexpr ElementType int64() { return {ElementKind::Int64, 0}; }
  static constexpr ElementType float64() { return {ElementKind::Float64, 0}; }
  static constexpr ElementType fixed_bytes(std::uint32_t w) { return {ElementKind::FixedBytes, w}; }
  static constexpr ElementType var_bytes() { return {ElementKind::VarBytes, 0}; }

  /// Bytes per element; 0 for VarBytes.
  constexpr std::size_t fixed_width() const noexcept {
    switch (kind) {
      case ElementKind::Int64:
      case ElementKind::Float64: return 8;
      case ElementKind::FixedBytes: return width;
      case ElementKind::VarBytes: return 0;
    }
    return 0;
  }
  constexpr bool is_fixed() const noexcept { return kind != ElementKind::VarBytes; }

  friend constexpr bool operator==(const ElementType&, const ElementType&) = default;
};

std::string to_string(ElementType t);

/// A flat typed array. VarBytes columns carry count+1 exclusive-end offsets.
class TypedColumn {
 public:
  TypedColumn() = default;
  /// Validates the layout invariants; throws InvalidArgument on violation.
  TypedColumn(ElementType type, std::size_t count, Bytes payload,
              std::vector<std::uint64_t> offsets = {});

  static TypedColumn from_int64(std::span<const std::int64_t> values);
  static TypedColumn from_float64(std::span<const double> values);
  static TypedColumn from_strings(std::span<const std::string> values);

  ElementType type() const noexcept { return type_; }
  std::size_t count() const noexcept { return count_; }
  const Bytes& payload() const noexcept { return payload_; }
  const std::vector<std::uint64_t>& offsets() const noexcept { return offsets_; }

  std::int64_t int64_at(std::size_t i) const { return load_le<std::int64_t>(payload_.data() + 8 * i); }
  double float64_at(std::size_t i) const { return load_le<double>(payload_.data() + 8 * i); }
  std::string_view string_at(std::size_t i) const;

  std::vector<std::int64_t> to_int64() const;
  std::vector<double> to_float64() const;
  std::vector<std::string> to_strings() const;

  /// Uncompressed footprint: payload plus the offset array for VarBytes.
  std::size_t plain_size() const noexcept;

  friend bool operator==(const TypedColumn&, const TypedColumn&) = default;

 private:
  ElementType type_{};
  std::size_t count_ = 0;
  Bytes payload_;
  std::vector<std::uint64_t> offsets_;
};

enum class StreamRole : std::uint8_t {
  Values = 0,
  Counts = 1,
  Indices = 2,
  Dictionary = 3,
  Packed = 4,
  EntropyPayload = 5,
  Offsets = 6,
  Aux = 7,
};
inline constexpr std::uint8_t kStreamRoleCount = 8;
std::string_view to_string(StreamRole role);

struct ByteStream {
  StreamRole role = StreamRole::Values;
  Bytes bytes;
  friend bool operator==(const ByteStream&, const ByteStream&) = default;
};

enum class CodecId : std::uint8_t {
  BitPack = 0,
  Delta = 1,
  RLE = 2,
  DeltaStride = 3,
  Dict = 4,
  Float2Int = 5,
  StrDict = 6,
  ANS = 7,
  Raw = 8,
};
inline constexpr std::uint8_t kCodecCount = 9;

/// Number of output streams (and therefore children) a codec node owns.
std::size_t codec_arity(CodecId id) noexcept;

struct CodecNode {
  CodecId codec = CodecId::Raw;
  Bytes params;  // codec-specific record, opaque at this layer
  std::vector<CodecNode> children;

  std::size_t raw_leaf_count() const;
  friend bool operator==(const CodecNode&, const CodecNode&) = default;
};

struct CompressedArtifact {
  CodecNode root;
  std::vector<ByteStream> streams;  // one per Raw leaf, depth-first order
  ElementType original_type{};
  std::uint64_t original_count = 0;
  std::uint64_t checksum = 0;

  friend bool operator==(const CompressedArtifact&, const CompressedArtifact&) = default;
};

/// Checks the structural invariants (arity, leaf/stream pairing); throws
/// ArityMismatch.
void validate_artifact(const CompressedArtifact& a);

/// FNV-1a 64-bit.
std::uint64_t checksum64(ByteSpan payload) noexcept;
std::uint64_t checksum64(ByteSpan payload, std::uint64_t state) noexcept;

/// Payload hash; VarBytes columns continue the hash over their offset array.
std::uint64_t column_checksum(const TypedColumn& col) noexcept;

}  // namespace patternpress
