#include <gtest/gtest.h>

#include "patternpress/datagen.hpp"
#include "patternpress/pipeline.hpp"
#include "patternpress/plan.hpp"

using namespace patternpress;

namespace {

Error parse_error(std::string_view text) {
  try {
    (void)parse_pipeline(text);
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "parsed: " << text;
  return Error(ErrorCode::Io, "");
}

}  // namespace

TEST(Pipeline, ParsesShapes) {
  const auto p = parse_pipeline("RLE | [Bit-packing, Delta encoding | Bit-packing]");
  EXPECT_EQ(p.codec, CodecId::RLE);
  EXPECT_EQ(p.shape, PipelineNode::Shape::Fanout);
  ASSERT_EQ(p.children.size(), 2u);
  EXPECT_EQ(p.children[0].codec, CodecId::BitPack);
  EXPECT_EQ(p.children[0].shape, PipelineNode::Shape::Leaf);
  EXPECT_EQ(p.children[1].shape, PipelineNode::Shape::Seq);
  EXPECT_EQ(p.children[1].children[0].codec, CodecId::BitPack);
}

TEST(Pipeline, NamesAreCaseAndSpaceInsensitive) {
  EXPECT_EQ(parse_pipeline("dictionary   ENCODING|bitpack"), parse_pipeline("Dictionary encoding | Bit-packing"));
}

TEST(Pipeline, TableRowsRenderCanonically) {
  for (const auto& [column, text] : tpch_pipelines()) {
    const auto p = parse_pipeline(text);
    EXPECT_EQ(render_pipeline(p), text) << column;
    EXPECT_EQ(parse_pipeline(render_pipeline(p)), p);
  }
  EXPECT_EQ(tpch_pipelines().size(), 10u);
}

TEST(Pipeline, Options) {
  const auto p = parse_pipeline("ANS(chunk_size=1024, table_log=10)");
  EXPECT_EQ(option_or(p, "chunk_size", "x"), "1024");
  EXPECT_EQ(option_or(p, "table_log", "x"), "10");
  EXPECT_EQ(option_or(p, "other", "x"), "x");
  EXPECT_EQ(render_pipeline(p), "ANS(chunk_size=1024, table_log=10)");
  EXPECT_EQ(parse_error("ANS(level=3)").code(), ErrorCode::ParseError);
}

TEST(Pipeline, ErrorsCarryPosition) {
  auto e = parse_error("Bit-packing |");
  EXPECT_EQ(e.code(), ErrorCode::ParseError);
  EXPECT_EQ(e.where(), 13u);
  e = parse_error("RLE | [Bit-packing Bit-packing]");
  EXPECT_EQ(e.code(), ErrorCode::UnknownCodec);
  e = parse_error("RLE | [Bit-packing,");
  EXPECT_EQ(e.code(), ErrorCode::ParseError);
  e = parse_error("Zstd");
  EXPECT_EQ(e.code(), ErrorCode::UnknownCodec);
  EXPECT_EQ(e.where(), 0u);
  e = parse_error("Bit-packing ]");
  EXPECT_EQ(e.code(), ErrorCode::ParseError);
  EXPECT_EQ(e.where(), 12u);
  EXPECT_EQ(parse_error("").code(), ErrorCode::ParseError);
}

TEST(Pipeline, ArityChecks) {
  EXPECT_EQ(parse_error("RLE | [Raw, Raw, Raw]").code(), ErrorCode::ArityError);
  EXPECT_EQ(parse_error("RLE | [Raw]").code(), ErrorCode::ArityError);
  EXPECT_EQ(parse_error("Delta encoding | [Raw, Raw]").code(), ErrorCode::ArityError);
  EXPECT_EQ(parse_error("Raw | Bit-packing").code(), ErrorCode::ArityError);
  EXPECT_NO_THROW(parse_pipeline("DeltaStride | [Raw, Raw]"));
  EXPECT_NO_THROW(parse_pipeline("DeltaStride | [Raw, Raw, Bit-packing]"));
}

TEST(Pipeline, BoundChildrenFillRaw) {
  const auto kids = bound_children(parse_pipeline("Dictionary encoding | Bit-packing"));
  ASSERT_EQ(kids.size(), 2u);
  EXPECT_EQ(kids[0].codec, CodecId::Raw);
  EXPECT_EQ(kids[1].codec, CodecId::BitPack);
  EXPECT_EQ(bound_children(parse_pipeline("DeltaStride")).size(), 3u);
}

TEST(Pipeline, RecoveredFromTree) {
  std::map<std::string, TypedColumn> cols;
  const auto ints = gen_tpch_like(TpchKind::OrderKeyLike, 3000, 1);
  for (const auto& [column, text] : tpch_pipelines()) {
    TypedColumn col = ints;
    if (column == "L_DISCOUNT") col = gen_tpch_like(TpchKind::DecimalLike, 3000, 1);
    if (column == "L_RETURNFLAG") col = gen_skewed_symbols(3000, {3, 1}, 1);
    if (column == "O_COMMENT") col = gen_tpch_like(TpchKind::CommentLike, 300, 1);
    const auto spec = parse_pipeline(text);
    const auto a = compile_encode(spec, col);
    EXPECT_EQ(render_pipeline(pipeline_from_tree(a.root)), text) << column;
  }
}
