#include <gtest/gtest.h>

#include "oracles.hpp"
#include "patternpress/container.hpp"
#include "patternpress/datagen.hpp"
#include "patternpress/plan.hpp"
#include "patternpress/reference.hpp"

using namespace patternpress;

namespace {

const VirtualDevice kDev{"t", 32, 16, 3};

TypedColumn column_for(const std::string& name, std::uint64_t rows, std::uint64_t seed) {
  if (name == "L_DISCOUNT") return gen_tpch_like(TpchKind::DecimalLike, rows, seed);
  if (name == "L_RETURNFLAG") return gen_skewed_symbols(rows, {6, 3, 1}, seed);
  if (name == "O_COMMENT") return gen_tpch_like(TpchKind::CommentLike, rows / 10, seed);
  if (name == "L_SHIPDATE") return gen_tpch_like(TpchKind::DateLike, rows, seed);
  if (name == "O_SHIPPRIORITY") return gen_rle_groups(rows / 50, RunDist::random(1, 99), seed);
  if (name == "L_PARTKEY" || name == "PS_SUPPKEY") return gen_tpch_like(TpchKind::FkLike, rows, seed);
  return gen_tpch_like(TpchKind::OrderKeyLike, rows, seed);
}

}  // namespace

TEST(Plan, DictBitPackFusesToOneKernel) {
  const auto col = gen_tpch_like(TpchKind::DateLike, 5000, 1);
  const auto a = compile_encode(parse_pipeline("Dictionary encoding | Bit-packing"), col);
  const auto plan = compile_decode(a);
  EXPECT_EQ(plan.kernel_count(), 2u);
  EXPECT_EQ(plan.materialized_intermediates(), 1u);
  const auto fused = fuse(plan);
  EXPECT_EQ(fused.kernel_count(), 1u);
  EXPECT_EQ(fused.materialized_intermediates(), 0u);
  const auto text = describe_plan(fused);
  EXPECT_NE(text.find("dict.lookup"), std::string::npos);
  EXPECT_NE(text.find("[fused: bitpack.unpack]"), std::string::npos);
}

TEST(Plan, FusedUnfusedReferenceAgree) {
  for (const auto& [name, text] : tpch_pipelines()) {
    for (std::uint64_t seed : {1u, 2u}) {
      const auto col = column_for(name, 20000, seed);
      const auto a = compile_encode(parse_pipeline(text), col);
      EXPECT_EQ(decode_artifact(a, kDev, {}, true), col) << name;
      EXPECT_EQ(decode_artifact(a, kDev, {}, false), col) << name;
      EXPECT_EQ(reference::decode(a), col) << name;
    }
  }
}

TEST(Plan, ExecutionConfigDoesNotChangeOutput) {
  const auto col = column_for("L_ORDERKEY", 30000, 3);
  const auto a = compile_encode(parse_pipeline(tpch_pipelines()[3].second), col);
  oracle::Gen g(9);
  for (int t = 0; t < 12; ++t) {
    ExecutionConfig e;
    e.fp_loops = g.pow2(0, 4);
    e.fp_lanes = g.pow2(5, 10);
    e.gp_lanes = g.pow2(5, 10);
    e.gp_coop = g.pow2(0, 9);
    e.np_coop = g.pow2(0, 10);
    EXPECT_EQ(decode_artifact(a, {"t", 32, 16, static_cast<std::uint32_t>(1 + g.below(4))}, e, g.coin()), col);
  }
}

TEST(Plan, NoFusableProducerSurvivesFusion) {
  for (const auto& [name, text] : tpch_pipelines()) {
    const auto a = compile_encode(parse_pipeline(text), column_for(name, 2000, 4));
    const auto plan = fuse(compile_decode(a));
    for (const auto& s : plan.steps) {
      if (s.kind != StepKind::FullyParallel || s.output == plan.result || s.out_elem_bytes > 8) continue;
      bool all_fusable = true, any_use = false;
      for (const auto& c : plan.steps) {
        for (std::size_t i = 0; i < c.inputs.size(); ++i) {
          if (c.inputs[i] != s.output) continue;
          any_use = true;
          const bool ok = (c.kind == StepKind::FullyParallel || c.kind == StepKind::GroupParallel ||
                           c.kind == StepKind::Scan) && c.fusable[i];
          all_fusable = all_fusable && ok;
        }
      }
      EXPECT_FALSE(any_use && all_fusable) << name << ": " << s.label << " left unfused";
    }
  }
}

TEST(Plan, MultiConsumerProducerDuplicated) {
  const auto a = compile_encode(parse_pipeline("String-dictionary | Bit-packing"),
                                gen_tpch_like(TpchKind::CommentLike, 500, 5));
  const auto plan = fuse(compile_decode(a));
  int holders = 0;
  for (const auto& s : plan.steps) {
    for (const auto& f : s.absorbed) holders += f == "bitpack.unpack";
  }
  EXPECT_EQ(holders, 2);
}

TEST(Traffic, NonCompressingBoundary) {
  const auto col = gen_tpch_like(TpchKind::DateLike, 50000, 6);
  const auto a = compile_encode(parse_pipeline("Dictionary encoding | Bit-packing"), col);
  const double c = static_cast<double>(compressed_size(a));
  const double p = static_cast<double>(col.plain_size());
  ASSERT_LT(c, p);
  const auto t = traffic_model(compile_decode(a), c, p);
  EXPECT_DOUBLE_EQ(t.unfused_bytes, c + p + 2 * p);
  EXPECT_DOUBLE_EQ(t.fused_bytes, c + p);
  EXPECT_GT(t.ratio, 2.0);
  EXPECT_DOUBLE_EQ(t.ratio, (c + 3 * p) / (c + p));
}

TEST(Traffic, CompressingBoundariesAtActualSize) {
  const auto col = gen_rle_groups(1000, RunDist::random(1, 30), 7);
  const auto a = compile_encode(parse_pipeline("RLE | [Bit-packing, Bit-packing]"), col);
  const double R = 1000;
  const double c = static_cast<double>(compressed_size(a)), p = static_cast<double>(col.plain_size());
  const auto t = traffic_model(compile_decode(a), c, p);
  // unpacked values, unpacked counts, offsets
  EXPECT_DOUBLE_EQ(t.unfused_bytes, c + p + 2 * (8 * R + 8 * R + 8 * (R + 1)));
  EXPECT_DOUBLE_EQ(t.fused_bytes, c + p + 2 * (8 * (R + 1)));
  EXPECT_DOUBLE_EQ(traffic_model(compile_decode(compile_encode(parse_pipeline("Bit-packing"), col)), c, p).ratio, 1.0);
}

TEST(Traffic, RatioAboveTwoWheneverCompressedBelowPlain) {
  for (double p : {10.0, 1e3, 1e6}) {
    for (double frac : {0.01, 0.3, 0.99}) {
      const auto col = gen_tpch_like(TpchKind::DecimalLike, 100, 1);
      const auto a = compile_encode(parse_pipeline("Float2Int | Bit-packing"), col);
      const auto t = traffic_model(compile_decode(a), frac * p, p);
      EXPECT_GT(t.ratio, 2.0);
    }
  }
}

TEST(PlanErrors, IndexOutOfDictionaryNamesStep) {
  const auto col = TypedColumn::from_int64(std::vector<std::int64_t>{5, 6, 5, 7});
  auto a = compile_encode(parse_pipeline("Dictionary encoding"), col);
  store_le<std::int64_t>(a.streams[1].bytes.data() + 16, 99);
  try {
    (void)decode_artifact(a, kDev);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IndexOutOfDictionary);
    EXPECT_EQ(e.where(), 2u);
    EXPECT_NE(std::string(e.what()).find("dict.lookup"), std::string::npos) << e.what();
  }
}

TEST(PlanErrors, ChecksumAndStreamSize) {
  const auto col = gen_tpch_like(TpchKind::FkLike, 1000, 2);
  auto a = compile_encode(parse_pipeline("Bit-packing"), col);
  auto bad = a;
  bad.checksum ^= 1;
  try {
    (void)decode_artifact(bad, kDev);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ChecksumMismatch);
  }
  bad = a;
  bad.streams[0].bytes.pop_back();
  EXPECT_THROW((void)decode_artifact(bad, kDev), Error);
}

TEST(PlanErrors, RleCountsDisagreeWithLength) {
  const auto col = gen_rle_groups(50, RunDist::even(3), 3);
  auto a = compile_encode(parse_pipeline("RLE"), col);
  store_le<std::int64_t>(a.streams[1].bytes.data(), 4);  // first count 3 -> 4
  try {
    (void)decode_artifact(a, kDev);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CountOverflow);
  }
}

TEST(Encode, TypeMismatchCarriesPath) {
  const auto strings = TypedColumn::from_strings(std::vector<std::string>{"a"});
  try {
    (void)compile_encode(parse_pipeline("Bit-packing"), strings);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TypeMismatch);
  }
  const auto floats = TypedColumn::from_float64(std::vector<double>{0.5});
  try {
    (void)compile_encode(parse_pipeline("Float2Int | Delta encoding | String-dictionary"), floats);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TypeMismatch);
    EXPECT_NE(std::string(e.what()).find("Float2Int / Delta encoding / String-dictionary"), std::string::npos)
        << e.what();
  }
}

TEST(Encode, RawKeepsBytes) {
  const auto col = TypedColumn::from_strings(std::vector<std::string>{"xy", "", "z"});
  const auto a = compile_encode(parse_pipeline("Raw"), col);
  ASSERT_EQ(a.streams.size(), 1u);
  EXPECT_EQ(a.streams[0].bytes.size(), 4 * 8 + 3u);
  EXPECT_EQ(decode_artifact(a, kDev), col);
}

TEST(Encode, EmptyColumns) {
  for (const auto& [name, text] : tpch_pipelines()) {
    TypedColumn col = TypedColumn::from_int64({});
    if (name == "L_DISCOUNT") col = TypedColumn::from_float64({});
    if (name == "L_RETURNFLAG") col = TypedColumn(ElementType::fixed_bytes(1), 0, {});
    if (name == "O_COMMENT") col = TypedColumn::from_strings({});
    const auto a = compile_encode(parse_pipeline(text), col);
    EXPECT_EQ(decode_artifact(deserialize_artifact(serialize_artifact(a)), kDev), col) << name;
    EXPECT_EQ(decode_artifact(a, kDev, {}, false), col) << name;
  }
}
