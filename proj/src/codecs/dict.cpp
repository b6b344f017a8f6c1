#include "patternpress/codecs/dict.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <string_view>
#include <unordered_map>

#include "patternpress/scan.hpp"
#include "record.hpp"

namespace patternpress::codecs {

Bytes DictParams::to_record() const {
  ByteWriter w;
  w.put(dict_count);
  return w.take();
}

DictParams DictParams::from_record(ByteSpan record) {
  auto r = detail::record_reader(record);
  DictParams p;
  p.dict_count = r.get<std::uint64_t>("dictionary size");
  detail::finish_record(r, "Dictionary encoding");
  return p;
}

DictEncoded dict_encode(const TypedColumn& col) {
  if (!col.type().is_fixed()) {
    throw Error(ErrorCode::TypeMismatch, "Dictionary encoding needs fixed-width elements, got " + to_string(col.type()));
  }
  const auto w = col.type().fixed_width();
  const auto* p = reinterpret_cast<const char*>(col.payload().data());
  std::unordered_map<std::string_view, std::int64_t> seen;
  DictEncoded out;
  Bytes dict;
  out.indices.reserve(col.count());
  for (std::size_t i = 0; i < col.count(); ++i) {
    const std::string_view key(p + i * w, w);
    auto [it, fresh] = seen.try_emplace(key, static_cast<std::int64_t>(seen.size()));
    if (fresh) dict.insert(dict.end(), key.begin(), key.end());
    out.indices.push_back(it->second);
  }
  out.dictionary = TypedColumn(col.type(), seen.size(), std::move(dict));
  return out;
}

ElementMap dict_map(Operand dictionary, Operand indices) {
  const auto eb = dictionary.elem_bytes();
  const auto dict_count = dictionary.count();
  auto check = [dict_count](std::uint64_t idx, std::uint64_t i) {
    if (idx >= dict_count) {
      throw Error(ErrorCode::IndexOutOfDictionary,
                  "index " + std::to_string(static_cast<std::int64_t>(idx)) + " outside dictionary of " +
                      std::to_string(dict_count),
                  i);
    }
  };
  if (dictionary.materialized()) {
    const auto* d = dictionary.bytes().data();
    return [d, eb, check, indices = std::move(indices)](std::uint64_t i, std::uint8_t* dst) {
      const auto idx = indices.word(i);
      check(idx, i);
      std::memcpy(dst, d + idx * eb, eb);
    };
  }
  if (eb > 8) throw Error(ErrorCode::InvalidArgument, "a fused dictionary needs entries of at most 8 bytes");
  return [dictionary = std::move(dictionary), eb, check, indices = std::move(indices)](std::uint64_t i,
                                                                                       std::uint8_t* dst) {
    const auto idx = indices.word(i);
    check(idx, i);
    const auto v = dictionary.word(idx);
    std::memcpy(dst, &v, eb);
  };
}

FullyParallelKernel dict_decode_kernel(ByteSpan dictionary, std::size_t elem_bytes,
                                       std::span<const std::int64_t> indices) {
  if (elem_bytes == 0 || dictionary.size() % elem_bytes != 0) {
    throw Error(ErrorCode::TruncatedStream, "dictionary length is not a multiple of the entry width");
  }
  return {indices.size(), elem_bytes,
          dict_map(Operand::buffer(dictionary, elem_bytes, dictionary.size() / elem_bytes),
                   Operand::buffer(detail::as_bytes(indices), 8, indices.size()))};
}

// ---- Float2Int ---------------------------------------------------------------

namespace {

constexpr std::array<double, kMaxDecimalScale + 1> kPow10 = {
    1e0, 1e1, 1e2, 1e3, 1e4, 1e5, 1e6, 1e7, 1e8, 1e9, 1e10, 1e11, 1e12, 1e13, 1e14, 1e15, 1e16, 1e17, 1e18};

// Scaled integer for x at scale d, if it restores x bit for bit.
std::optional<std::int64_t> try_scale(double x, unsigned d) {
  const double s = std::nearbyint(x * kPow10[d]);
  if (!(std::fabs(s) < 9.2e18)) return std::nullopt;
  const auto r = static_cast<std::int64_t>(s);
  if (std::bit_cast<std::uint64_t>(float2int_value(r, d)) != std::bit_cast<std::uint64_t>(x)) return std::nullopt;
  return r;
}

[[noreturn]] void not_decimal(double x, std::size_t i) {
  throw Error(ErrorCode::NotDecimalRepresentable,
              "value " + std::to_string(x) + " has no exact decimal form with at most 18 digits", i);
}

}  // namespace

Bytes Float2IntParams::to_record() const {
  ByteWriter w;
  w.put(decimal_scale);
  return w.take();
}

Float2IntParams Float2IntParams::from_record(ByteSpan record) {
  auto r = detail::record_reader(record);
  Float2IntParams p;
  p.decimal_scale = r.get<std::uint8_t>("decimal scale");
  detail::finish_record(r, "Float2Int");
  if (p.decimal_scale > kMaxDecimalScale) {
    throw Error(ErrorCode::DecodeError, "decimal scale " + std::to_string(p.decimal_scale) + " > 18");
  }
  return p;
}

double float2int_value(std::int64_t scaled, unsigned decimal_scale) noexcept {
  return static_cast<double>(scaled) / kPow10[decimal_scale];
}

Float2IntEncoded float2int_encode(std::span<const double> col) {
  // The column's scale is the largest per-value minimum; if some value fails
  // to round-trip there, larger scales are tried.
  unsigned d = 0;
  for (std::size_t i = 0; i < col.size(); ++i) {
    const double x = col[i];
    if (!std::isfinite(x) || (x == 0.0 && std::signbit(x))) not_decimal(x, i);
    if (try_scale(x, d)) continue;
    unsigned e = d + 1;
    while (e <= kMaxDecimalScale && !try_scale(x, e)) ++e;
    if (e > kMaxDecimalScale) not_decimal(x, i);
    d = e;
  }
  for (;; ++d) {
    if (d > kMaxDecimalScale) throw Error(ErrorCode::NotDecimalRepresentable, "no common decimal scale <= 18");
    Float2IntEncoded out;
    out.params.decimal_scale = static_cast<std::uint8_t>(d);
    out.ints.reserve(col.size());
    bool ok = true;
    for (double x : col) {
      auto r = try_scale(x, d);
      if (!r) {
        ok = false;
        break;
      }
      out.ints.push_back(*r);
    }
    if (ok) return out;
  }
}

ElementMap float2int_map(Operand ints, const Float2IntParams& params) {
  const unsigned d = params.decimal_scale;
  return [ints = std::move(ints), d](std::uint64_t i, std::uint8_t* dst) {
    store_le(dst, float2int_value(static_cast<std::int64_t>(ints.word(i)), d));
  };
}

FullyParallelKernel float2int_decode_kernel(std::span<const std::int64_t> ints, const Float2IntParams& params) {
  return {ints.size(), 8, float2int_map(Operand::buffer(detail::as_bytes(ints), 8, ints.size()), params)};
}

// ---- String dictionary -------------------------------------------------------

bool is_token_delimiter(char c) noexcept { return c == ' ' || c == '.'; }

std::vector<std::string_view> tokenize(std::string_view s) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < s.size()) {
    const auto start = i;
    while (i < s.size() && !is_token_delimiter(s[i])) ++i;
    while (i < s.size() && is_token_delimiter(s[i])) ++i;
    tokens.push_back(s.substr(start, i - start));
  }
  return tokens;
}

Bytes StrDictParams::to_record() const {
  ByteWriter w;
  w.put(static_cast<std::uint32_t>(dictionary.size()));
  w.put(occurrences);
  for (const auto& t : dictionary) w.put(static_cast<std::uint32_t>(t.size()));
  for (const auto& t : dictionary) w.put_bytes(std::string_view(t));
  return w.take();
}

StrDictParams StrDictParams::from_record(ByteSpan record) {
  auto r = detail::record_reader(record);
  StrDictParams p;
  const auto n = r.get<std::uint32_t>("token count");
  p.occurrences = r.get<std::uint64_t>("token occurrences");
  if (static_cast<std::uint64_t>(n) * 4 > r.remaining()) {
    throw Error(ErrorCode::TruncatedInput, "input ends inside field 'token lengths'", r.position());
  }
  std::vector<std::uint32_t> lengths(n);
  for (auto& len : lengths) len = r.get<std::uint32_t>("token length");
  p.dictionary.reserve(n);
  for (auto len : lengths) {
    auto b = r.get_bytes(len, "token bytes");
    p.dictionary.emplace_back(reinterpret_cast<const char*>(b.data()), b.size());
  }
  detail::finish_record(r, "String-dictionary");
  return p;
}

StrDictParams strdict_build(const TypedColumn& col) {
  return strdict_encode(col).params;
}

StrDictEncoded strdict_encode(const TypedColumn& col) {
  if (col.type().kind != ElementKind::VarBytes) {
    throw Error(ErrorCode::TypeMismatch, "String-dictionary needs VarBytes, got " + to_string(col.type()));
  }
  StrDictEncoded out;
  std::unordered_map<std::string_view, std::int64_t> ids;
  out.token_counts.reserve(col.count());
  for (std::size_t s = 0; s < col.count(); ++s) {
    const auto tokens = tokenize(col.string_at(s));
    for (auto t : tokens) {
      auto [it, fresh] = ids.try_emplace(t, static_cast<std::int64_t>(ids.size()));
      if (fresh) out.params.dictionary.emplace_back(t);
      out.indices.push_back(it->second);
    }
    out.token_counts.push_back(static_cast<std::int64_t>(tokens.size()));
  }
  out.params.occurrences = out.indices.size();
  return out;
}

TokenTable::TokenTable(const StrDictParams& params) {
  starts.reserve(params.dictionary.size() + 1);
  starts.push_back(0);
  for (const auto& t : params.dictionary) {
    bytes.insert(bytes.end(), t.begin(), t.end());
    starts.push_back(bytes.size());
  }
}

namespace {

[[noreturn]] void bad_token(std::uint64_t id, std::uint64_t n, std::uint64_t at) {
  throw Error(ErrorCode::IndexOutOfDictionary,
              "token id " + std::to_string(static_cast<std::int64_t>(id)) + " outside dictionary of " +
                  std::to_string(n),
              at);
}

}  // namespace

ElementMap strdict_length_map(std::shared_ptr<const TokenTable> table, Operand indices) {
  return [table = std::move(table), indices = std::move(indices)](std::uint64_t i, std::uint8_t* dst) {
    const auto id = indices.word(i);
    const auto n = table->starts.size() - 1;
    if (id >= n) bad_token(id, n, i);
    store_le(dst, static_cast<std::int64_t>(table->length(id)));
  };
}

GroupEmit strdict_emit(std::shared_ptr<const TokenTable> table, Operand indices) {
  return [table = std::move(table), indices = std::move(indices)](std::uint64_t g, std::uint64_t j,
                                                                  std::uint8_t* dst) {
    const auto id = indices.word(g);
    const auto n = table->starts.size() - 1;
    if (id >= n) bad_token(id, n, g);
    *dst = table->bytes[table->starts[id] + j];
  };
}

ElementMap strdict_string_offset_map(Operand token_offsets, Operand token_byte_offsets) {
  return [token_offsets = std::move(token_offsets), token_byte_offsets = std::move(token_byte_offsets)](
             std::uint64_t s, std::uint8_t* dst) {
    const auto t = token_offsets.word(s);
    if (t >= token_byte_offsets.count()) {
      throw Error(ErrorCode::DecodeError, "string refers past the last token", s);
    }
    store_le(dst, token_byte_offsets.word(t));
  };
}

TypedColumn strdict_decode(const StrDictParams& params, std::span<const std::int64_t> indices,
                           std::span<const std::int64_t> token_counts, const VirtualDevice& dev) {
  const ExecutionConfig cfg;
  auto table = std::make_shared<const TokenTable>(params);
  const auto idx = Operand::buffer(detail::as_bytes(indices), 8, indices.size());

  const FullyParallelKernel lengths_k{indices.size(), 8, strdict_length_map(table, idx)};
  const auto lengths = run_fully_parallel(lengths_k, cfg.fully_parallel(8), dev);
  std::vector<std::int64_t> byte_offsets(indices.size() + 1);
  const auto* lp = lengths.data();
  scan_into([lp](std::uint64_t i) { return load_le<std::int64_t>(lp + 8 * i); }, indices.size(),
            ScanMode::Exclusive, 0, byte_offsets, dev.worker_count);

  std::vector<std::uint64_t> group_offsets(byte_offsets.begin(), byte_offsets.end());
  const GroupParallelKernel bytes_k{group_offsets, 1, strdict_emit(table, idx)};
  auto payload = run_group_parallel(bytes_k, cfg.group_parallel(dev), dev);

  std::vector<std::int64_t> token_offsets(token_counts.size() + 1);
  const auto* cp = token_counts.data();
  scan_into([cp](std::uint64_t i) { return cp[i]; }, token_counts.size(), ScanMode::Exclusive, 0, token_offsets,
            dev.worker_count);
  if (static_cast<std::uint64_t>(token_offsets.back()) != indices.size()) {
    throw Error(ErrorCode::CountOverflow, "per-string token counts do not sum to the token stream length");
  }

  const FullyParallelKernel offsets_k{
      token_counts.size() + 1, 8,
      strdict_string_offset_map(
          Operand::buffer(detail::as_bytes(token_offsets), 8, token_offsets.size()),
          Operand::buffer(detail::as_bytes(byte_offsets), 8, byte_offsets.size()))};
  const auto offs = run_fully_parallel(offsets_k, cfg.fully_parallel(8), dev);
  std::vector<std::uint64_t> string_offsets(token_counts.size() + 1);
  std::memcpy(string_offsets.data(), offs.data(), offs.size());
  return TypedColumn(ElementType::var_bytes(), token_counts.size(), std::move(payload), std::move(string_offsets));
}

}  // namespace patternpress::codecs
