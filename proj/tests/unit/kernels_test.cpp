#include <gtest/gtest.h>

#include "oracles.hpp"
#include "patternpress/kernels.hpp"
#include "patternpress/scan.hpp"

using namespace patternpress;

namespace {

VirtualDevice device(std::uint32_t workers) { return {"t", 32, 12, workers}; }

std::uint64_t mix(std::uint64_t i) { return i * 0x9E3779B97F4A7C15ULL ^ (i >> 7); }

}  // namespace

TEST(FullyParallel, OutputIndependentOfConfigAndWorkers) {
  const std::uint64_t n = 12345;
  FullyParallelKernel k{n, 8, [](std::uint64_t i, std::uint8_t* dst) { store_le(dst, mix(i)); }};
  Bytes expect(n * 8);
  for (std::uint64_t i = 0; i < n; ++i) store_le(expect.data() + 8 * i, mix(i));
  oracle::Gen g(4);
  for (int t = 0; t < 25; ++t) {
    const LaunchConfig cfg{g.pow2(0, 4), g.pow2(5, 10), 1, Pattern::FullyParallel};
    EXPECT_EQ(run_fully_parallel(k, cfg, device(static_cast<std::uint32_t>(1 + g.below(6)))), expect)
        << to_string(cfg);
  }
}

TEST(FullyParallel, ReportsLowestFailingIndex) {
  FullyParallelKernel k{100000, 8, [](std::uint64_t i, std::uint8_t* dst) {
                          if (i % 7919 == 5000) throw Error(ErrorCode::IndexOutOfDictionary, "bad", i);
                          store_le(dst, i);
                        }};
  for (std::uint32_t w : {1u, 3u, 8u}) {
    try {
      (void)run_fully_parallel(k, {2, 64, 1, Pattern::FullyParallel}, device(w));
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::IndexOutOfDictionary);
      EXPECT_EQ(e.where(), 5000u);
    }
  }
}

TEST(FullyParallel, ForeignExceptionBecomesDecodeError) {
  FullyParallelKernel k{10, 8, [](std::uint64_t i, std::uint8_t*) {
                          if (i == 3) throw std::runtime_error("boom");
                        }};
  try {
    (void)run_fully_parallel(k, {1, 32, 1, Pattern::FullyParallel}, device(2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DecodeError);
    EXPECT_EQ(e.where(), 3u);
  }
}

TEST(FullyParallel, RejectsInvalidConfig) {
  FullyParallelKernel k{10, 8, [](std::uint64_t, std::uint8_t*) {}};
  EXPECT_THROW((void)run_fully_parallel(k, {3, 32, 1, Pattern::FullyParallel}, device(1)), Error);
}

TEST(GroupParallel, MatchesSequentialExpansion) {
  oracle::Gen g(6);
  std::vector<std::uint64_t> sizes(700);
  for (auto& s : sizes) s = g.below(3) == 0 ? g.below(2000) : g.below(5);
  const auto off = oracle::offsets_of(sizes);
  GroupParallelKernel k{off, 8, [](std::uint64_t grp, std::uint64_t item, std::uint8_t* dst) {
                          store_le(dst, grp * 100000 + item);
                        }};
  Bytes expect;
  for (std::size_t grp = 0; grp < sizes.size(); ++grp) {
    for (std::uint64_t j = 0; j < sizes[grp]; ++j) {
      const std::uint64_t v = grp * 100000 + j;
      expect.insert(expect.end(), reinterpret_cast<const std::uint8_t*>(&v), reinterpret_cast<const std::uint8_t*>(&v) + 8);
    }
  }
  for (int t = 0; t < 25; ++t) {
    const LaunchConfig cfg{12, g.pow2(5, 10), g.pow2(0, 10), Pattern::GroupParallel};
    if (cfg.C > cfg.L * cfg.S) continue;
    EXPECT_EQ(run_group_parallel(k, cfg, device(static_cast<std::uint32_t>(1 + g.below(4)))), expect)
        << to_string(cfg);
  }
}

TEST(GroupParallel, RejectsBadOffsets) {
  const std::vector<std::uint64_t> off{0, 5, 3};
  GroupParallelKernel k{off, 8, [](std::uint64_t, std::uint64_t, std::uint8_t*) {}};
  EXPECT_THROW((void)run_group_parallel(k, {12, 32, 1, Pattern::GroupParallel}, device(1)), Error);
  EXPECT_THROW(check_group_offsets(std::vector<std::uint64_t>{1, 2}), Error);
  EXPECT_NO_THROW(check_group_offsets(std::vector<std::uint64_t>{0, 0, 2}));
}

TEST(GroupParallel, LowestFailingElement) {
  const std::vector<std::uint64_t> off{0, 10, 20, 30};
  GroupParallelKernel k{off, 8, [](std::uint64_t grp, std::uint64_t item, std::uint8_t*) {
                          if ((grp == 1 && item == 4) || grp == 2) throw Error(ErrorCode::DecodeError, "x");
                        }};
  try {
    (void)run_group_parallel(k, {12, 32, 4, Pattern::GroupParallel}, device(3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.where(), 14u);
  }
}

TEST(NonParallel, ChunksLandInPlace) {
  const std::uint64_t chunks = 77;
  Bytes input(chunks * 3);
  NonParallelKernel k;
  k.out_elem_bytes = 1;
  k.chunk_in_offsets.push_back(0);
  k.chunk_out_offsets.push_back(0);
  for (std::uint64_t c = 0; c < chunks; ++c) {
    input[3 * c] = static_cast<std::uint8_t>(c);
    k.chunk_in_offsets.push_back(3 * (c + 1));
    k.chunk_out_offsets.push_back(k.chunk_out_offsets.back() + c % 5);
  }
  k.input = input;
  k.decode = [](std::uint64_t c, ByteSpan in, std::span<std::uint8_t> out) {
    ASSERT_EQ(in.size(), 3u);
    for (auto& b : out) b = static_cast<std::uint8_t>(in[0] + c);
  };
  Bytes expect;
  for (std::uint64_t c = 0; c < chunks; ++c) expect.insert(expect.end(), c % 5, static_cast<std::uint8_t>(2 * c));
  for (std::uint64_t C : {1u, 2u, 4u, 1024u}) {
    const LaunchConfig cfg{np_block_count(chunks, 32, C), 32, C, Pattern::NonParallel};
    EXPECT_EQ(run_non_parallel(k, cfg, device(4)), expect);
  }
}

TEST(NonParallel, LowestFailingChunk) {
  Bytes input(100);
  NonParallelKernel k;
  k.input = input;
  for (std::uint64_t c = 0; c <= 100; ++c) {
    k.chunk_in_offsets.push_back(c);
    k.chunk_out_offsets.push_back(c);
  }
  k.decode = [](std::uint64_t c, ByteSpan, std::span<std::uint8_t>) {
    if (c == 40 || c == 90) throw std::runtime_error("corrupt");
  };
  try {
    (void)run_non_parallel(k, {4, 32, 1, Pattern::NonParallel}, device(4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ChunkDecodeError);
    EXPECT_EQ(e.where(), 40u);
  }
}

TEST(ThroughputBound, Formula) {
  EXPECT_EQ(throughput_bound(100, 1, 4), 80.0);
  EXPECT_EQ(throughput_bound(100, 4, 4), 50.0);
  double prev = 0;
  for (double c = 1000; c >= 1; c /= 2) {
    const double b = throughput_bound(100, c, 1000);
    EXPECT_GT(b, prev);
    EXPECT_LT(b, 100.0);
    prev = b;
  }
}

TEST(Scan, MatchesNaiveLoop) {
  oracle::Gen g(8);
  for (std::size_t n : {0u, 1u, 2u, 1000u, 40000u, 200000u}) {
    const auto a = oracle::random_ints(g, n, -1000000, 1000000);
    std::vector<std::int64_t> inc(n), exc{0};
    std::int64_t acc = 0;
    for (std::size_t i = 0; i < n; ++i) {
      acc += a[i];
      inc[i] = acc;
      exc.push_back(acc);
    }
    for (std::uint32_t w : {1u, 3u, 7u}) {
      EXPECT_EQ(prefix_sum(a, ScanMode::Inclusive, w), inc);
      EXPECT_EQ(prefix_sum(a, ScanMode::Exclusive, w), exc);
    }
    std::vector<std::int64_t> out(n);
    scan_into([&](std::uint64_t i) { return a[i]; }, n, ScanMode::Inclusive, 5, out, 4);
    for (std::size_t i = 0; i < n; ++i) ASSERT_EQ(out[i], inc[i] + 5);
  }
}

TEST(Scan, OverflowDetected) {
  std::vector<std::int64_t> a(100000, 1);
  a[70000] = INT64_MAX;
  for (std::uint32_t w : {1u, 4u}) {
    try {
      (void)prefix_sum(a, ScanMode::Inclusive, w);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::ArithmeticOverflow);
    }
  }
  EXPECT_THROW((void)prefix_sum(std::vector<std::int64_t>{INT64_MIN, -1}, ScanMode::Exclusive), Error);
}
