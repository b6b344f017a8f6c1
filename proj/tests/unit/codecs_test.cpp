#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "patternpress/codecs/ans.hpp"
#include "patternpress/codecs/bitpack.hpp"
#include "patternpress/codecs/delta.hpp"
#include "patternpress/codecs/dict.hpp"
#include "patternpress/codecs/registry.hpp"
#include "patternpress/reference.hpp"

using namespace patternpress;
using namespace patternpress::codecs;

namespace {

const VirtualDevice kDev{"t", 32, 8, 3};

std::vector<std::int64_t> unpack(const BitPacked& bp, std::uint64_t n) {
  const auto k = bitpack_decode_kernel(bp.packed, bp.params, n);
  const auto out = run_fully_parallel(k, {2, 64, 1, Pattern::FullyParallel}, kDev);
  return TypedColumn(ElementType::int64(), n, out).to_int64();
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Io;
}

}  // namespace

TEST(BitPack, HandPackedExample) {
  const std::vector<std::int64_t> v{5, 6, 7};
  const auto bp = bitpack_encode(v);
  EXPECT_EQ(bp.params.bit_width, 2);
  EXPECT_EQ(bp.params.for_base, 5);
  EXPECT_EQ(bp.packed, (Bytes{0x24}));  // fields 0,1,2 LSB first
  EXPECT_EQ(unpack(bp, 3), v);
}

TEST(BitPack, WidthIsMinimal) {
  oracle::Gen g(1);
  for (unsigned w = 0; w <= 64; ++w) {
    std::vector<std::int64_t> v(257);
    const std::int64_t base = g.range(-1000, 1000);
    for (auto& x : v) {
      const auto field = w == 0 ? 0 : (w == 64 ? g.u64() : g.u64() >> (64 - w));
      x = static_cast<std::int64_t>(static_cast<std::uint64_t>(base) + field);
    }
    const auto bp = bitpack_encode(v);
    const auto lo = *std::min_element(v.begin(), v.end());
    const auto hi = *std::max_element(v.begin(), v.end());
    EXPECT_EQ(bp.params.bit_width, oracle::bits_for(static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo)));
    EXPECT_EQ(bp.packed.size(), (v.size() * bp.params.bit_width + 7) / 8);
    EXPECT_EQ(unpack(bp, v.size()), v) << "w=" << w;
    EXPECT_EQ(reference::bitunpack(bp.packed, bp.params, v.size()), v);
  }
}

TEST(BitPack, ExtremesAndEmpty) {
  const std::vector<std::int64_t> v{INT64_MIN, INT64_MAX, 0, -1};
  const auto bp = bitpack_encode(v);
  EXPECT_EQ(bp.params.bit_width, 64);
  EXPECT_EQ(unpack(bp, v.size()), v);
  const auto e = bitpack_encode({});
  EXPECT_TRUE(e.packed.empty());
  EXPECT_EQ(e.params.bit_width, 0);
}

TEST(BitPack, WrongPackedLength) {
  const auto bp = bitpack_encode(std::vector<std::int64_t>{1, 2, 3, 4, 900});
  EXPECT_EQ(code_of([&] { (void)bitpack_map(ByteSpan(bp.packed).first(bp.packed.size() - 1), bp.params, 5); }),
            ErrorCode::TruncatedStream);
}

TEST(BitPack, RecordRoundTrip) {
  const BitPackParams p{13, -77};
  EXPECT_EQ(BitPackParams::from_record(p.to_record()), p);
  auto rec = p.to_record();
  rec.push_back(0);
  EXPECT_THROW(BitPackParams::from_record(rec), Error);
  rec.resize(2);
  EXPECT_THROW(BitPackParams::from_record(rec), Error);
}

TEST(Delta, EncodeDecode) {
  const std::vector<std::int64_t> v{10, 12, 9, 9, 100};
  const auto d = delta_encode(v);
  EXPECT_EQ(d.params.base, 10);
  EXPECT_EQ(d.deltas, (std::vector<std::int64_t>{0, 2, -3, 0, 91}));
  for (std::uint32_t w : {1u, 4u}) EXPECT_EQ(delta_decode(d.deltas, d.params, w), v);
  EXPECT_EQ(code_of([] { (void)delta_encode(std::vector<std::int64_t>{INT64_MIN, INT64_MAX}); }),
            ErrorCode::ArithmeticOverflow);
}

TEST(Rle, HandExample) {
  const std::vector<std::int64_t> v{1, 1, 2, 2, 2, 3};
  const auto r = rle_encode(v);
  EXPECT_EQ(r.values, (std::vector<std::int64_t>{1, 2, 3}));
  EXPECT_EQ(r.counts, (std::vector<std::int64_t>{2, 3, 1}));
  const auto plan = rle_decode_plan(r.values, r.counts, 2);
  EXPECT_EQ(plan.offsets, (std::vector<std::uint64_t>{0, 2, 5, 6}));
  const auto out = run_group_parallel(plan.kernel(), {8, 32, 1, Pattern::GroupParallel}, kDev);
  EXPECT_EQ(TypedColumn(ElementType::int64(), 6, out).to_int64(), v);
}

TEST(Rle, PropertyRoundTrip) {
  oracle::Gen g(2);
  for (int t = 0; t < 30; ++t) {
    const auto v = oracle::runs(g, g.below(500), 1 + g.below(100));
    const auto r = rle_encode(v);
    for (std::size_t i = 1; i < r.values.size(); ++i) EXPECT_NE(r.values[i], r.values[i - 1]);
    EXPECT_EQ(reference::rle_expand(r.values, r.counts), v);
    const auto plan = rle_decode_plan(r.values, r.counts, 3);
    const LaunchConfig cfg{8, g.pow2(5, 10), g.pow2(0, 8), Pattern::GroupParallel};
    const auto out = run_group_parallel(plan.kernel(), cfg, kDev);
    EXPECT_EQ(TypedColumn(ElementType::int64(), v.size(), out).to_int64(), v);
  }
}

TEST(Rle, CountErrors) {
  const std::vector<std::int64_t> values{1, 2}, neg{3, -1};
  EXPECT_EQ(code_of([&] { (void)rle_decode_plan(values, neg, 1); }), ErrorCode::CountOverflow);
  const std::vector<std::int64_t> big{INT64_MAX, INT64_MAX};
  EXPECT_EQ(code_of([&] { (void)rle_decode_plan(values, big, 1); }), ErrorCode::CountOverflow);
  std::vector<std::int64_t> counts{2, 2};
  const auto as_operand = Operand::buffer(ByteSpan(reinterpret_cast<const std::uint8_t*>(counts.data()), 16), 8, 2);
  EXPECT_EQ(code_of([&] { (void)group_offsets_from_counts(as_operand, 1, 5); }), ErrorCode::CountOverflow);
  EXPECT_EQ(group_offsets_from_counts(as_operand, 1, 4), (std::vector<std::uint64_t>{0, 2, 4}));
}

TEST(DeltaStride, GreedyRuns) {
  const std::vector<std::int64_t> v{1, 3, 5, 7, 10};
  const auto r = deltastride_encode(v);
  EXPECT_EQ(r.starts, (std::vector<std::int64_t>{1, 10}));
  EXPECT_EQ(r.strides, (std::vector<std::int64_t>{2, 0}));
  EXPECT_EQ(r.counts, (std::vector<std::int64_t>{4, 1}));
  const auto plan = deltastride_decode_plan(r.starts, r.strides, r.counts, 2);
  const auto out = run_group_parallel(plan.kernel(), {8, 64, 2, Pattern::GroupParallel}, kDev);
  EXPECT_EQ(TypedColumn(ElementType::int64(), v.size(), out).to_int64(), v);
}

TEST(DeltaStride, PropertyRoundTrip) {
  oracle::Gen g(3);
  for (int t = 0; t < 30; ++t) {
    std::vector<std::int64_t> v;
    const auto groups = g.below(200);
    for (std::uint64_t i = 0; i < groups; ++i) {
      const auto start = g.range(-1000000, 1000000);
      const auto stride = g.range(-5, 5);
      const auto len = g.range(1, 40);
      for (std::int64_t j = 0; j < len; ++j) v.push_back(start + j * stride);
    }
    if (g.coin() && !v.empty()) v.back() = INT64_MAX;
    const auto r = deltastride_encode(v);
    EXPECT_EQ(reference::deltastride_expand(r.starts, r.strides, r.counts), v);
    const auto plan = deltastride_decode_plan(r.starts, r.strides, r.counts, 2);
    const auto out = run_group_parallel(plan.kernel(), {8, 32, g.pow2(0, 6), Pattern::GroupParallel}, kDev);
    EXPECT_EQ(TypedColumn(ElementType::int64(), v.size(), out).to_int64(), v);
  }
}

TEST(Dict, FirstAppearanceOrder) {
  const auto col = TypedColumn::from_int64(std::vector<std::int64_t>{7, 3, 7, 9, 3});
  const auto d = dict_encode(col);
  EXPECT_EQ(d.dictionary.to_int64(), (std::vector<std::int64_t>{7, 3, 9}));
  EXPECT_EQ(d.indices, (std::vector<std::int64_t>{0, 1, 0, 2, 1}));
  const auto k = dict_decode_kernel(d.dictionary.payload(), 8, d.indices);
  EXPECT_EQ(run_fully_parallel(k, {1, 32, 1, Pattern::FullyParallel}, kDev), col.payload());
}

TEST(Dict, WideEntriesAndBadIndex) {
  Bytes raw(16 * 4);
  for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = static_cast<std::uint8_t>((i / 16) % 2 * 200 + i % 16);
  const TypedColumn col(ElementType::fixed_bytes(16), 4, raw);
  const auto d = dict_encode(col);
  EXPECT_EQ(d.dictionary.count(), 2u);
  const auto k = dict_decode_kernel(d.dictionary.payload(), 16, d.indices);
  EXPECT_EQ(run_fully_parallel(k, {1, 32, 1, Pattern::FullyParallel}, kDev), raw);

  const std::vector<std::int64_t> bad{0, 1, 5, 2};
  const auto kb = dict_decode_kernel(d.dictionary.payload(), 16, bad);
  try {
    (void)run_fully_parallel(kb, {1, 32, 1, Pattern::FullyParallel}, kDev);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IndexOutOfDictionary);
    EXPECT_EQ(e.where(), 2u);
  }
}

TEST(Float2Int, ScaleSelection) {
  auto enc = float2int_encode(std::vector<double>{0.1, 0.25, 3.0});
  EXPECT_EQ(enc.params.decimal_scale, 2);
  EXPECT_EQ(enc.ints, (std::vector<std::int64_t>{10, 25, 300}));
  enc = float2int_encode(std::vector<double>{1.5, -2.5});
  EXPECT_EQ(enc.params.decimal_scale, 1);
  EXPECT_EQ(float2int_encode(std::vector<double>{42, -7}).params.decimal_scale, 0);
  EXPECT_EQ(float2int_encode({}).params.decimal_scale, 0);
}

TEST(Float2Int, BitExactRoundTrip) {
  oracle::Gen g(4);
  for (unsigned d = 0; d <= 6; ++d) {
    std::vector<double> v(1000);
    for (auto& x : v) x = static_cast<double>(g.range(-100000000, 100000000)) / std::pow(10.0, d);
    const auto enc = float2int_encode(v);
    EXPECT_LE(enc.params.decimal_scale, d);
    const auto k = float2int_decode_kernel(enc.ints, enc.params);
    const auto out = run_fully_parallel(k, {4, 128, 1, Pattern::FullyParallel}, kDev);
    EXPECT_EQ(out, TypedColumn::from_float64(v).payload());
  }
}

TEST(Float2Int, RejectsNonDecimal) {
  for (double bad : {std::nan(""), std::numeric_limits<double>::infinity(), -0.0, 1e300, 1e-30}) {
    EXPECT_EQ(code_of([&] { (void)float2int_encode(std::vector<double>{1.0, bad}); }),
              ErrorCode::NotDecimalRepresentable)
        << bad;
  }
}

TEST(StrDict, Tokenize) {
  const auto t = tokenize("hello world. ok");
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(t[0], "hello ");
  EXPECT_EQ(t[1], "world. ");
  EXPECT_EQ(t[2], "ok");
  EXPECT_TRUE(tokenize("").empty());
  EXPECT_EQ(tokenize("  a").size(), 2u);
  oracle::Gen g(5);
  for (const auto& s : oracle::random_strings(g, 300)) {
    std::string joined;
    for (auto tok : tokenize(s)) {
      EXPECT_FALSE(tok.empty());
      joined += tok;
    }
    EXPECT_EQ(joined, s);
  }
}

TEST(StrDict, EncodeAndEngineDecode) {
  oracle::Gen g(6);
  const auto strings = oracle::random_strings(g, 2000);
  const auto col = TypedColumn::from_strings(strings);
  const auto enc = strdict_encode(col);
  EXPECT_EQ(enc.params.occurrences, enc.indices.size());
  EXPECT_EQ(enc.token_counts.size(), strings.size());
  EXPECT_EQ(StrDictParams::from_record(enc.params.to_record()), enc.params);
  const auto out = strdict_decode(enc.params, enc.indices, enc.token_counts, kDev);
  EXPECT_EQ(out, col);
}

TEST(Ans, NormalizedTableSumsAndKeepsSymbols) {
  std::array<std::uint64_t, 256> counts{};
  counts['a'] = 1000000;
  counts['b'] = 1;
  counts['c'] = 3;
  for (unsigned tl : {8u, 12u, 14u}) {
    const auto f = normalize_frequencies(counts, tl);
    std::uint64_t sum = 0;
    for (auto x : f) sum += x;
    EXPECT_EQ(sum, 1u << tl);
    EXPECT_GE(f['b'], 1);
    EXPECT_GE(f['c'], 1);
    EXPECT_EQ(f['z'], 0);
  }
  EXPECT_THROW(normalize_frequencies(counts, 7), Error);
  EXPECT_THROW(normalize_frequencies(counts, 15), Error);
}

TEST(Ans, RoundTripAcrossChunkSizes) {
  oracle::Gen g(7);
  Bytes data(50000);
  for (auto& b : data) b = static_cast<std::uint8_t>(g.below(10) < 7 ? 'x' : g.below(256));
  for (std::uint32_t chunk : {1u, 128u, 4096u, 1u << 20}) {
    const auto enc = ans_encode(data, chunk, 11);
    EXPECT_EQ(enc.params.input_size, data.size());
    EXPECT_EQ(enc.params.n_chunks(), (data.size() + chunk - 1) / chunk);
    const auto k = ans_decode_plan(enc.payload, enc.params);
    const LaunchConfig cfg{np_block_count(k.n_chunks(), 32, 2), 32, 2, Pattern::NonParallel};
    EXPECT_EQ(run_non_parallel(k, cfg, kDev), data);
    EXPECT_EQ(reference::ans_decode(enc.payload, enc.params), data);
    EXPECT_EQ(AnsParams::from_record(enc.params.to_record()), enc.params);
  }
  const auto empty = ans_encode({});
  EXPECT_EQ(empty.params.n_chunks(), 0u);
  EXPECT_TRUE(reference::ans_decode(empty.payload, empty.params).empty());
}

TEST(Ans, SingleSymbolAndAllSymbols) {
  Bytes same(10000, 42);
  auto enc = ans_encode(same);
  EXPECT_EQ(reference::ans_decode(enc.payload, enc.params), same);
  Bytes all(256 * 40);
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<std::uint8_t>(i);
  enc = ans_encode(all, 1024, 8);
  EXPECT_EQ(reference::ans_decode(enc.payload, enc.params), all);
}

TEST(Ans, CorruptionIsChunkError) {
  oracle::Gen g(8);
  Bytes data(20000);
  for (auto& b : data) b = static_cast<std::uint8_t>(g.below(4));
  const auto enc = ans_encode(data, 1024);
  int detected = 0;
  for (int t = 0; t < 200; ++t) {
    auto bad = enc.payload;
    const auto pos = g.below(bad.size());
    bad[pos] ^= static_cast<std::uint8_t>(1 + g.below(255));
    try {
      const auto k = ans_decode_plan(bad, enc.params);
      const auto out = run_non_parallel(k, {np_block_count(k.n_chunks(), 32, 1), 32, 1, Pattern::NonParallel}, kDev);
      EXPECT_NE(out, data);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::ChunkDecodeError);
      ++detected;
    }
  }
  EXPECT_GT(detected, 150);
}

TEST(Ans, TruncatedPayloadRejected) {
  Bytes data(5000, 1);
  data[7] = 2;
  const auto enc = ans_encode(data, 1024);
  EXPECT_EQ(code_of([&] { (void)ans_decode_plan(ByteSpan(enc.payload).first(enc.payload.size() - 1), enc.params); }),
            ErrorCode::ChunkDecodeError);
}

TEST(Registry, NamesAndAliases) {
  EXPECT_EQ(codec_info(CodecId::BitPack).name, "Bit-packing");
  EXPECT_EQ(codec_info(CodecId::Dict).name, "Dictionary encoding");
  EXPECT_EQ(codec_info(CodecId::Dict).primary_output, 1u);
  EXPECT_EQ(codec_info(CodecId::DeltaStride).required_outputs, 2u);
  EXPECT_EQ(find_codec("bit packing"), CodecId::BitPack);
  EXPECT_EQ(find_codec("DELTA_ENCODING"), CodecId::Delta);
  EXPECT_EQ(find_codec("String-dictionary"), CodecId::StrDict);
  EXPECT_FALSE(find_codec("zstd").has_value());
  EXPECT_EQ(normalize_codec_name(" Bit-Packing_x "), "bitpackingx");
}
