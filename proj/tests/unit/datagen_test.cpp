#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "patternpress/codecs/bitpack.hpp"
#include "patternpress/codecs/dict.hpp"
#include "patternpress/datagen.hpp"

using namespace patternpress;

TEST(Rng, DeterministicAndSeedSensitive) {
  Rng a(7), b(7), c(8);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    EXPECT_EQ(x, b.next());
    EXPECT_NE(x, c.next());
  }
  Rng r(1);
  for (int i = 0; i < 10000; ++i) {
    EXPECT_LT(r.below(7), 7u);
    const auto u = r.unit();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    const auto v = r.between(3, 5);
    EXPECT_GE(v, 3u);
    EXPECT_LE(v, 5u);
  }
}

TEST(Rng, SplitmixKnownSequence) {
  // First outputs for state 0 published with the reference implementation.
  std::uint64_t s = 0;
  EXPECT_EQ(splitmix64(s), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(splitmix64(s), 0x6E789E6AA1B965F4ULL);
}

TEST(UniformBits, RangeAndWidth) {
  const auto col = gen_uniform_bits(10000, 11, 3);
  const auto v = col.to_int64();
  EXPECT_EQ(*std::max_element(v.begin(), v.end()) < 2048, true);
  EXPECT_EQ(codecs::bitpack_encode(v).params.bit_width, 11);
  EXPECT_EQ(gen_uniform_bits(100, 11, 3), gen_uniform_bits(100, 11, 3));
  EXPECT_THROW(gen_uniform_bits(1, 0, 1), Error);
  EXPECT_THROW(gen_uniform_bits(1, 64, 1), Error);
}

TEST(RunDist, Parse) {
  auto d = parse_run_dist("even:2");
  EXPECT_EQ(d.kind, RunDist::Kind::Even);
  EXPECT_EQ(d.a, 2u);
  d = parse_run_dist("random:1:64");
  EXPECT_EQ(d.kind, RunDist::Kind::Random);
  EXPECT_EQ(d.b, 64u);
  d = parse_run_dist("outlier:1024:0.01");
  EXPECT_EQ(d.a, 1024u);
  EXPECT_DOUBLE_EQ(d.frac, 0.01);
  d = parse_run_dist("mixed:even:2/random:1:8");
  ASSERT_EQ(d.parts.size(), 2u);
  EXPECT_EQ(d.parts[1].b, 8u);
  for (auto bad : {"", "even", "even:0", "random:5:1", "outlier:4:2", "gauss:1", "even:x", "mixed:even:2"}) {
    EXPECT_THROW(parse_run_dist(bad), Error) << bad;
  }
}

TEST(RunDist, EvenExample) {
  const auto col = gen_rle_groups(3, RunDist::even(2), 1).to_int64();
  ASSERT_EQ(col.size(), 6u);
  EXPECT_EQ(col[0], col[1]);
  EXPECT_EQ(col[2], col[3]);
  EXPECT_EQ(col[4], col[5]);
  EXPECT_NE(col[1], col[2]);
  EXPECT_NE(col[3], col[4]);
}

TEST(RunDist, HistogramsFollowParameters) {
  const std::uint64_t n = 200000;
  const auto random = gen_run_lengths(n, RunDist::random(1, 64), 2);
  double mean = 0;
  for (auto x : random) {
    ASSERT_GE(x, 1u);
    ASSERT_LE(x, 64u);
    mean += static_cast<double>(x);
  }
  EXPECT_NEAR(mean / n, 32.5, 32.5 * 0.02);
  const auto out = gen_run_lengths(n, RunDist::outlier(1024, 0.01), 3);
  const auto big = std::count(out.begin(), out.end(), 1024u);
  EXPECT_EQ(big, 2000);
  EXPECT_EQ(std::count(out.begin(), out.end(), 1u), static_cast<long>(n - 2000));
  const auto mixed = gen_run_lengths(10, parse_run_dist("mixed:even:3/even:5"), 4);
  EXPECT_EQ(mixed, (std::vector<std::uint64_t>{3, 3, 3, 3, 3, 5, 5, 5, 5, 5}));
}

TEST(RunDist, AdjacentRunsDiffer) {
  const auto v = gen_rle_groups(5000, RunDist::random(1, 4), 9).to_int64();
  std::size_t runs = 1;
  for (std::size_t i = 1; i < v.size(); ++i) runs += v[i] != v[i - 1];
  EXPECT_EQ(runs, 5000u);
}

TEST(Skewed, EntropyNearTarget) {
  const std::vector<double> ratios{0.9, 0.1};
  const auto col = gen_skewed_symbols(1000000, ratios, 5);
  const double target = entropy_bits(ratios);
  EXPECT_NEAR(target, -(0.9 * std::log2(0.9) + 0.1 * std::log2(0.1)), 1e-12);
  EXPECT_NEAR(empirical_entropy_bits(col.payload()), target, target * 0.01);
  EXPECT_NEAR(empirical_entropy_bits(col.payload()), oracle::shannon_bits(col.payload()), 1e-9);
  EXPECT_THROW(gen_skewed_symbols(10, {}, 1), Error);
  EXPECT_THROW(gen_skewed_symbols(10, {1, -1}, 1), Error);
  EXPECT_THROW(gen_skewed_symbols(10, std::vector<double>(257, 1), 1), Error);
  EXPECT_THROW(gen_skewed_symbols(10, {0, 0}, 1), Error);
}

TEST(Tpch, ShapesAndDeterminism) {
  const auto dates = gen_tpch_like(TpchKind::DateLike, 200000, 1).to_int64();
  std::set<std::int64_t> distinct(dates.begin(), dates.end());
  EXPECT_GT(distinct.size(), 2400u);
  EXPECT_LE(distinct.size(), static_cast<std::size_t>(kDateRangeDays));

  const auto ok = gen_tpch_like(TpchKind::OrderKeyLike, 10000, 1).to_int64();
  EXPECT_TRUE(std::is_sorted(ok.begin(), ok.end()));
  EXPECT_EQ(ok.front(), 1);

  const auto dec = gen_tpch_like(TpchKind::DecimalLike, 10000, 1).to_float64();
  for (double x : dec) {
    EXPECT_GE(x, 0.0);
    EXPECT_LT(x, 1.0);
  }
  EXPECT_EQ(codecs::float2int_encode(dec).params.decimal_scale, 2);

  const auto fk = gen_tpch_like(TpchKind::FkLike, 10000, 1).to_int64();
  for (auto x : fk) {
    EXPECT_GE(x, 1);
    EXPECT_LE(x, kFkRange);
  }
  for (auto k : {TpchKind::OrderKeyLike, TpchKind::DateLike, TpchKind::DecimalLike, TpchKind::CommentLike,
                 TpchKind::FkLike}) {
    EXPECT_EQ(gen_tpch_like(k, 500, 42), gen_tpch_like(k, 500, 42));
    EXPECT_EQ(parse_tpch_kind(to_string(k)), k);
  }
  EXPECT_EQ(parse_tpch_kind("OrderKeyLike"), TpchKind::OrderKeyLike);
  EXPECT_THROW(parse_tpch_kind("blob"), Error);
}

TEST(Tpch, CommentVocabulary) {
  const auto& words = comment_words();
  EXPECT_EQ(words.size(), kCommentWordPool);
  EXPECT_EQ(std::set<std::string>(words.begin(), words.end()).size(), words.size());
  for (const auto& w : words) {
    for (char ch : w) EXPECT_FALSE(codecs::is_token_delimiter(ch));
  }
  const auto col = gen_tpch_like(TpchKind::CommentLike, 20000, 3);
  const auto params = codecs::strdict_build(col);
  EXPECT_GT(params.token_count(), 2048u);
  EXPECT_LE(params.token_count(), 4096u);
}
