#include "patternpress/tuner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <tuple>

#include "patternpress/codecs/ans.hpp"
#include "patternpress/codecs/bitpack.hpp"
#include "patternpress/codecs/delta.hpp"
#include "patternpress/datagen.hpp"
#include "patternpress/kernels.hpp"
#include "patternpress/plan.hpp"

namespace patternpress {

namespace {

std::vector<std::uint64_t> pow2_range(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t v = lo; v <= hi; v *= 2) out.push_back(v);
  return out;
}

bool is_valid(const LaunchConfig& cfg, const ConfigSpace& space) {
  try {
    switch (space.pattern) {
      case Pattern::FullyParallel: validate_fully_parallel(cfg, space.device, space.elem_bytes); break;
      case Pattern::GroupParallel: validate_group_parallel(cfg, space.device); break;
      case Pattern::NonParallel: validate_non_parallel(cfg, space.device, space.n_chunks); break;
    }
    return true;
  } catch (const Error&) {
    return false;
  }
}

LaunchConfig make_config(const ConfigSpace& space, std::uint64_t L, std::uint64_t S, std::uint64_t C) {
  return {L, S, C, space.pattern};
}

using Key = std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>;

class Evaluator {
 public:
  Evaluator(const MetricFn& metric, SearchReport& report) : metric_(metric), report_(report) {}

  double operator()(const LaunchConfig& cfg) {
    const Key key{cfg.L, cfg.S, cfg.C};
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    const double m = metric_(cfg);
    cache_.emplace(key, m);
    report_.trace.push_back({cfg, m});
    ++report_.evaluations;
    if (report_.trace.size() == 1 || m > report_.best_metric) {
      report_.best_metric = m;
      report_.best_config = cfg;
    }
    return m;
  }

 private:
  const MetricFn& metric_;
  SearchReport& report_;
  std::map<Key, double> cache_;
};

using Clock = std::chrono::steady_clock;

}  // namespace

SpaceAxes space_axes(const ConfigSpace& space) {
  const auto& dev = space.device;
  SpaceAxes ax;
  switch (space.pattern) {
    case Pattern::FullyParallel:
      ax.L = pow2_range(1, kMaxFpLoops);
      ax.S = pow2_range(dev.warp_size, kMaxLanes);
      ax.C = {fp_coop_for(space.elem_bytes)};
      break;
    case Pattern::GroupParallel:
      ax.L = {dev.num_cus};
      ax.S = pow2_range(dev.warp_size, kMaxLanes);
      ax.C = pow2_range(1, kMaxCoop);
      break;
    case Pattern::NonParallel:
      ax.S = {dev.warp_size};
      ax.C = pow2_range(1, kMaxCoop);
      // L follows from C; the axis lists the distinct derived values.
      for (auto c : ax.C) ax.L.push_back(np_block_count(space.n_chunks, dev.warp_size, c));
      std::sort(ax.L.begin(), ax.L.end());
      ax.L.erase(std::unique(ax.L.begin(), ax.L.end()), ax.L.end());
      break;
  }
  return ax;
}

std::vector<LaunchConfig> enumerate_space(const ConfigSpace& space) {
  const auto ax = space_axes(space);
  std::vector<LaunchConfig> out;
  if (space.pattern == Pattern::NonParallel) {
    for (auto c : ax.C) {
      const auto cfg = make_config(space, np_block_count(space.n_chunks, ax.S[0], c), ax.S[0], c);
      if (is_valid(cfg, space)) out.push_back(cfg);
    }
    return out;
  }
  for (auto l : ax.L) {
    for (auto s : ax.S) {
      for (auto c : ax.C) {
        const auto cfg = make_config(space, l, s, c);
        if (is_valid(cfg, space)) out.push_back(cfg);
      }
    }
  }
  return out;
}

MetricFn timed_metric(const BenchKernel& kernel, int reps) {
  if (reps < 1) throw Error(ErrorCode::InvalidArgument, "reps must be >= 1");
  return [kernel, reps](const LaunchConfig& cfg) {
    std::vector<double> t;
    for (int r = 0; r < reps; ++r) {
      const auto t0 = Clock::now();
      kernel.run(cfg);
      t.push_back(std::chrono::duration<double>(Clock::now() - t0).count());
    }
    std::sort(t.begin(), t.end());
    return static_cast<double>(kernel.plain_bytes) / std::max(t[t.size() / 2], 1e-9);
  };
}

SearchReport brute_force_search(const ConfigSpace& space, const MetricFn& metric) {
  SearchReport report;
  Evaluator eval(metric, report);
  for (const auto& cfg : enumerate_space(space)) eval(cfg);
  if (report.trace.empty()) throw Error(ErrorCode::InvalidConfig, "config space is empty");
  return report;
}

SearchReport pruned_search(const ConfigSpace& space, const MetricFn& metric, double noise_margin) {
  if (!(noise_margin >= 0 && noise_margin < 1)) throw Error(ErrorCode::InvalidArgument, "noise margin must be in [0, 1)");
  SearchReport report;
  Evaluator eval(metric, report);
  const auto ax = space_axes(space);
  const auto valid = enumerate_space(space);
  if (valid.empty()) throw Error(ErrorCode::InvalidConfig, "config space is empty");

  // NonParallel L is derived, so C is the only free axis there.
  const bool derived_l = space.pattern == Pattern::NonParallel;
  auto complete = [&](LaunchConfig c) {
    if (derived_l) c.L = np_block_count(space.n_chunks, c.S, c.C);
    return c;
  };

  LaunchConfig cur = complete(make_config(space, ax.L.front(), ax.S.front(), ax.C.front()));
  if (!is_valid(cur, space)) cur = valid.front();
  double cur_metric = eval(cur);

  auto sweep = [&](const std::vector<std::uint64_t>& axis, std::uint64_t LaunchConfig::*field) {
    if (axis.size() < 2) return;
    LaunchConfig best = cur;
    double best_metric = cur_metric;
    std::optional<double> prev;
    int stalled = 0;
    for (auto v : axis) {
      LaunchConfig c = cur;
      c.*field = v;
      c = complete(c);
      if (!is_valid(c, space)) {
        if (v > cur.*field) break;
        continue;
      }
      const double m = eval(c);
      const bool gain = m > best_metric * (1 + noise_margin);
      if (m > best_metric) {
        best = c;
        best_metric = m;
      }
      if (prev && m < *prev * (1 - noise_margin)) break;
      // A flat stretch inside the noise band ends the sweep too.
      if (noise_margin > 0 && prev && !gain && ++stalled >= 2) break;
      if (gain) stalled = 0;
      prev = m;
    }
    cur = best;
    cur_metric = best_metric;
  };

  sweep(ax.S, &LaunchConfig::S);
  sweep(ax.C, &LaunchConfig::C);
  if (!derived_l) sweep(ax.L, &LaunchConfig::L);
  return report;
}

BenchKernel make_bitunpack_kernel(std::uint64_t rows, unsigned bit_width, std::uint64_t seed,
                                  const VirtualDevice& dev) {
  const auto col = gen_uniform_bits(rows, bit_width, seed);
  auto enc = std::make_shared<codecs::BitPacked>(codecs::bitpack_encode(col.to_int64()));
  auto out = std::make_shared<Bytes>(rows * 8);
  BenchKernel k;
  k.name = "bitunpack";
  k.space = {Pattern::FullyParallel, dev, 8, 1};
  k.plain_bytes = rows * 8;
  k.run = [enc, out, rows, dev](const LaunchConfig& cfg) {
    const auto kernel = codecs::bitpack_decode_kernel(enc->packed, enc->params, rows);
    run_fully_parallel_into(kernel, cfg, dev, *out);
  };
  return k;
}

BenchKernel make_rle_kernel(std::uint64_t groups, std::uint64_t run_lo, std::uint64_t run_hi,
                            std::uint64_t seed, const VirtualDevice& dev) {
  const auto col = gen_rle_groups(groups, RunDist::random(run_lo, run_hi), seed);
  const auto enc = codecs::rle_encode(col.to_int64());
  auto plan = std::make_shared<codecs::GroupPlan>(codecs::rle_decode_plan(enc.values, enc.counts, dev.worker_count));
  auto values = std::make_shared<std::vector<std::int64_t>>(enc.values);
  auto out = std::make_shared<Bytes>(col.count() * 8);
  BenchKernel k;
  k.name = "rle";
  k.space = {Pattern::GroupParallel, dev, 8, 1};
  k.plain_bytes = col.count() * 8;
  k.run = [plan, values, out, dev](const LaunchConfig& cfg) {
    run_group_parallel_into(plan->kernel(), cfg, dev, *out);
  };
  return k;
}

BenchKernel make_ans_kernel(std::uint64_t bytes, std::uint64_t seed, const VirtualDevice& dev,
                            std::uint32_t chunk_size) {
  const auto col = gen_skewed_symbols(bytes, {8, 4, 2, 1, 1}, seed);
  auto enc = std::make_shared<codecs::AnsEncoded>(codecs::ans_encode(col.payload(), chunk_size));
  auto out = std::make_shared<Bytes>(bytes);
  BenchKernel k;
  k.name = "ans";
  k.space = {Pattern::NonParallel, dev, 1, static_cast<std::size_t>(enc->params.n_chunks())};
  k.plain_bytes = bytes;
  k.run = [enc, out, dev](const LaunchConfig& cfg) {
    const auto kernel = codecs::ans_decode_plan(enc->payload, enc->params);
    run_non_parallel_into(kernel, cfg, dev, *out);
  };
  return k;
}

namespace {

std::optional<std::uint64_t> first_ans_chunks(const CodecNode& node) {
  if (node.codec == CodecId::ANS) return codecs::AnsParams::from_record(node.params).n_chunks();
  for (const auto& c : node.children) {
    if (auto n = first_ans_chunks(c)) return n;
  }
  return std::nullopt;
}

StepKind step_kind(Pattern p) {
  switch (p) {
    case Pattern::FullyParallel: return StepKind::FullyParallel;
    case Pattern::GroupParallel: return StepKind::GroupParallel;
    case Pattern::NonParallel: return StepKind::NonParallel;
  }
  return StepKind::FullyParallel;
}

}  // namespace

BenchKernel make_artifact_kernel(const CompressedArtifact& artifact, Pattern pattern, const VirtualDevice& dev) {
  auto plan = std::make_shared<DecodePlan>(fuse(compile_decode(artifact)));
  const auto it = std::find_if(plan->steps.begin(), plan->steps.end(),
                               [&](const PlanStep& s) { return s.kind == step_kind(pattern); });
  if (it == plan->steps.end()) {
    throw Error(ErrorCode::InvalidArgument,
                "artifact decode has no " + std::string(to_string(pattern)) + " step");
  }
  BenchKernel k;
  k.name = it->label;
  k.space = {pattern, dev, it->out_elem_bytes, 1};
  if (pattern == Pattern::NonParallel) k.space.n_chunks = first_ans_chunks(artifact.root).value_or(1);
  auto art = std::make_shared<CompressedArtifact>(artifact);
  k.plain_bytes = execute_plan(*plan, *art, dev, {}).plain_size();
  k.run = [plan, art, dev](const LaunchConfig& cfg) {
    ExecutionConfig exec;
    exec.apply(cfg);
    (void)execute_plan(*plan, *art, dev, exec);
  };
  return k;
}

CrossDeviceReport cross_device_report(const std::map<std::string, LaunchConfig>& native,
                                      const KernelFactory& factory, const std::vector<VirtualDevice>& devices,
                                      int reps) {
  if (devices.size() < 2) throw Error(ErrorCode::InvalidArgument, "need at least two devices");
  CrossDeviceReport r;
  std::vector<BenchKernel> kernels;
  for (const auto& d : devices) {
    if (!native.count(d.name)) throw Error(ErrorCode::InvalidArgument, "no native config for " + d.name);
    r.devices.push_back(d.name);
    kernels.push_back(factory(d));
  }
  const auto n = devices.size();
  // measured[i][j]: device i's config on device j
  std::vector<std::vector<std::optional<double>>> measured(n, std::vector<std::optional<double>>(n));
  for (std::size_t j = 0; j < n; ++j) {
    const auto metric = timed_metric(kernels[j], reps);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& cfg = native.at(devices[i].name);
      if (is_valid(cfg, kernels[j].space)) measured[i][j] = metric(cfg);
    }
  }
  r.efficiency.assign(n, std::vector<std::optional<double>>(n));
  for (std::size_t j = 0; j < n; ++j) {
    const auto base = measured[j][j];
    if (!base) throw Error(ErrorCode::InvalidConfig, "native config invalid on " + devices[j].name);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == j) {
        r.efficiency[i][j] = 1.0;
      } else if (measured[i][j]) {
        r.efficiency[i][j] = *measured[i][j] / *base;
      }
    }
  }
  return r;
}

}  // namespace patternpress
