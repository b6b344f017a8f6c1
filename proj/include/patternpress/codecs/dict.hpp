#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "patternpress/bytes.hpp"
#include "patternpress/datamodel.hpp"
#include "patternpress/kernels.hpp"
#include "patternpress/operand.hpp"

namespace patternpress::codecs {

struct DictParams {
  std::uint64_t dict_count = 0;

  Bytes to_record() const;
  static DictParams from_record(ByteSpan record);
};

struct DictEncoded {
  TypedColumn dictionary;  // same element type as the input
  std::vector<std::int64_t> indices;
};

/// Unique values in first-appearance order; indices are positions in the
/// dictionary. Accepts any fixed-width column.
DictEncoded dict_encode(const TypedColumn& col);

/// map(i) = dictionary[indices(i)]. Throws IndexOutOfDictionary(i). The
/// dictionary may be lazy when its entries are at most 8 bytes.
ElementMap dict_map(Operand dictionary, Operand indices);

FullyParallelKernel dict_decode_kernel(ByteSpan dictionary, std::size_t elem_bytes,
                                       std::span<const std::int64_t> indices);

// ---- Float2Int -------------------------------------------------------------

struct Float2IntParams {
  std::uint8_t decimal_scale = 0;  // d in 0..18

  Bytes to_record() const;
  static Float2IntParams from_record(ByteSpan record);
};

inline constexpr unsigned kMaxDecimalScale = 18;

struct Float2IntEncoded {
  std::vector<std::int64_t> ints;
  Float2IntParams params;
};

/// Smallest d <= 18 for which ints[i] / 10^d reproduces every value bit for
/// bit. Throws NotDecimalRepresentable otherwise (including non-finite input).
Float2IntEncoded float2int_encode(std::span<const double> col);

/// The decode formula the encoder verifies against.
double float2int_value(std::int64_t scaled, unsigned decimal_scale) noexcept;

ElementMap float2int_map(Operand ints, const Float2IntParams& params);
FullyParallelKernel float2int_decode_kernel(std::span<const std::int64_t> ints,
                                            const Float2IntParams& params);

// ---- String dictionary -----------------------------------------------------

/// Token dictionary for VarBytes columns. A token is a maximal run of
/// non-delimiter bytes followed by its trailing delimiter bytes (space and
/// period), so concatenating a string's tokens restores it.
struct StrDictParams {
  std::vector<std::string> dictionary;  // first-appearance order
  std::uint64_t occurrences = 0;        // total tokens across all strings

  std::uint64_t token_count() const noexcept { return dictionary.size(); }

  Bytes to_record() const;
  static StrDictParams from_record(ByteSpan record);
  friend bool operator==(const StrDictParams&, const StrDictParams&) = default;
};

bool is_token_delimiter(char c) noexcept;

/// Splits one string into tokens.
std::vector<std::string_view> tokenize(std::string_view s);

/// Builds the dictionary for a VarBytes column.
StrDictParams strdict_build(const TypedColumn& col);

struct StrDictEncoded {
  StrDictParams params;
  std::vector<std::int64_t> indices;       // token id per occurrence
  std::vector<std::int64_t> token_counts;  // tokens per string
};

StrDictEncoded strdict_encode(const TypedColumn& col);

/// Byte layout of the dictionary used by the decode kernels.
struct TokenTable {
  Bytes bytes;                        // concatenated tokens
  std::vector<std::uint64_t> starts;  // token_count + 1 byte offsets

  explicit TokenTable(const StrDictParams& params);
  std::uint64_t length(std::uint64_t id) const noexcept { return starts[id + 1] - starts[id]; }
};

/// map(i) = byte length of the token at occurrence i.
ElementMap strdict_length_map(std::shared_ptr<const TokenTable> table, Operand indices);
/// emit(g, j) = byte j of the token at occurrence g.
GroupEmit strdict_emit(std::shared_ptr<const TokenTable> table, Operand indices);
/// map(s) = token_byte_offsets[token_offsets[s]] for s in 0..n_strings.
ElementMap strdict_string_offset_map(Operand token_offsets, Operand token_byte_offsets);

/// Reference-free decode through the pattern engine (length map, scans,
/// group expansion, offset gather).
TypedColumn strdict_decode(const StrDictParams& params, std::span<const std::int64_t> indices,
                           std::span<const std::int64_t> token_counts, const VirtualDevice& dev);

}  // namespace patternpress::codecs
