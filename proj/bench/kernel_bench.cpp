// OpenMP kernels against the serial reference loops, and fused against
// unfused plan execution. Worker count follows PATTERNPRESS_WORKERS or the
// OpenMP default.

#include <benchmark/benchmark.h>

#include "patternpress/codecs/ans.hpp"
#include "patternpress/codecs/bitpack.hpp"
#include "patternpress/codecs/delta.hpp"
#include "patternpress/datagen.hpp"
#include "patternpress/plan.hpp"
#include "patternpress/reference.hpp"
#include "patternpress/scan.hpp"

namespace pp = patternpress;

namespace {

constexpr std::uint64_t kRows = 1 << 22;

pp::VirtualDevice dev() { return pp::VirtualDevice::profile("a100"); }

void set_bytes(benchmark::State& state, std::uint64_t plain_bytes) {
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * plain_bytes));
}

// ---- bit-unpack -------------------------------------------------------------

const pp::codecs::BitPacked& packed_input() {
  static const auto enc = pp::codecs::bitpack_encode(pp::gen_uniform_bits(kRows, 17, 1).to_int64());
  return enc;
}

void BM_BitUnpackParallel(benchmark::State& state) {
  const auto& enc = packed_input();
  const auto k = pp::codecs::bitpack_decode_kernel(enc.packed, enc.params, kRows);
  const auto cfg = pp::ExecutionConfig{}.fully_parallel(8);
  pp::Bytes out(kRows * 8);
  for (auto _ : state) {
    pp::run_fully_parallel_into(k, cfg, dev(), out);
    benchmark::DoNotOptimize(out.data());
  }
  set_bytes(state, kRows * 8);
}
BENCHMARK(BM_BitUnpackParallel)->Unit(benchmark::kMillisecond);

void BM_BitUnpackSerial(benchmark::State& state) {
  const auto& enc = packed_input();
  for (auto _ : state) benchmark::DoNotOptimize(pp::reference::bitunpack(enc.packed, enc.params, kRows));
  set_bytes(state, kRows * 8);
}
BENCHMARK(BM_BitUnpackSerial)->Unit(benchmark::kMillisecond);

// ---- prefix sum -------------------------------------------------------------

const std::vector<std::int64_t>& deltas() {
  static const auto d = [] {
    auto v = pp::gen_uniform_bits(kRows, 10, 2).to_int64();
    return v;
  }();
  return d;
}

void BM_PrefixSumParallel(benchmark::State& state) {
  const auto workers = dev().worker_count;
  for (auto _ : state) benchmark::DoNotOptimize(pp::prefix_sum(deltas(), pp::ScanMode::Inclusive, workers));
  set_bytes(state, kRows * 8);
}
BENCHMARK(BM_PrefixSumParallel)->Unit(benchmark::kMillisecond);

void BM_PrefixSumSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(pp::reference::prefix_sum(deltas(), 0));
  set_bytes(state, kRows * 8);
}
BENCHMARK(BM_PrefixSumSerial)->Unit(benchmark::kMillisecond);

// ---- run expansion ------------------------------------------------------------

const pp::codecs::RleEncoded& runs() {
  static const auto enc = pp::codecs::rle_encode(
      pp::gen_rle_groups(kRows / 16, pp::parse_run_dist("mixed:random:1:16/outlier:2000:0.001"), 3).to_int64());
  return enc;
}

void BM_RleExpandParallel(benchmark::State& state) {
  const auto& enc = runs();
  const auto d = dev();
  const auto plan = pp::codecs::rle_decode_plan(enc.values, enc.counts, d.worker_count);
  const auto cfg = pp::ExecutionConfig{}.group_parallel(d);
  pp::Bytes out(plan.offsets.back() * 8);
  for (auto _ : state) {
    pp::run_group_parallel_into(plan.kernel(), cfg, d, out);
    benchmark::DoNotOptimize(out.data());
  }
  set_bytes(state, out.size());
}
BENCHMARK(BM_RleExpandParallel)->Unit(benchmark::kMillisecond);

void BM_RleExpandSerial(benchmark::State& state) {
  const auto& enc = runs();
  std::uint64_t n = 0;
  for (auto _ : state) {
    const auto out = pp::reference::rle_expand(enc.values, enc.counts);
    n = out.size();
    benchmark::DoNotOptimize(out.data());
  }
  set_bytes(state, n * 8);
}
BENCHMARK(BM_RleExpandSerial)->Unit(benchmark::kMillisecond);

// ---- ANS ----------------------------------------------------------------------

const pp::codecs::AnsEncoded& entropy_input() {
  static const auto enc = pp::codecs::ans_encode(pp::gen_skewed_symbols(kRows, {0.6, 0.3, 0.1}, 4).payload(), 4096);
  return enc;
}

void BM_AnsDecodeParallel(benchmark::State& state) {
  const auto& enc = entropy_input();
  const auto d = dev();
  const auto k = pp::codecs::ans_decode_plan(enc.payload, enc.params);
  const auto cfg = pp::ExecutionConfig{}.non_parallel(d, k.n_chunks());
  pp::Bytes out(kRows);
  for (auto _ : state) {
    pp::run_non_parallel_into(k, cfg, d, out);
    benchmark::DoNotOptimize(out.data());
  }
  set_bytes(state, kRows);
}
BENCHMARK(BM_AnsDecodeParallel)->Unit(benchmark::kMillisecond);

void BM_AnsDecodeSerial(benchmark::State& state) {
  const auto& enc = entropy_input();
  for (auto _ : state) benchmark::DoNotOptimize(pp::reference::ans_decode(enc.payload, enc.params));
  set_bytes(state, kRows);
}
BENCHMARK(BM_AnsDecodeSerial)->Unit(benchmark::kMillisecond);

// ---- whole pipelines: fused, unfused, serial interpreter ------------------------

const pp::CompressedArtifact& dict_artifact() {
  static const auto a = pp::compile_encode(pp::parse_pipeline("Dictionary encoding | Bit-packing"),
                                           pp::gen_tpch_like(pp::TpchKind::DateLike, kRows, 5));
  return a;
}

void BM_DictBitPack(benchmark::State& state) {
  const auto& a = dict_artifact();
  const bool fused = state.range(0) != 0;
  state.SetLabel(fused ? "fused" : "unfused");
  for (auto _ : state) benchmark::DoNotOptimize(pp::decode_artifact(a, dev(), {}, fused));
  set_bytes(state, a.original_count * 8);
}
BENCHMARK(BM_DictBitPack)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

void BM_DictBitPackSerial(benchmark::State& state) {
  const auto& a = dict_artifact();
  for (auto _ : state) benchmark::DoNotOptimize(pp::reference::decode(a));
  set_bytes(state, a.original_count * 8);
}
BENCHMARK(BM_DictBitPackSerial)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
