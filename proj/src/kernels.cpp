#include "patternpress/kernels.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>

#include "patternpress/geometry.hpp"

namespace patternpress {

namespace {

// Keeps the failure with the smallest key seen by any lane. The key is also
// published atomically so lanes can poll it without taking the lock.
class FirstFailure {
 public:
  void record(std::uint64_t key, std::exception_ptr e) {
    std::lock_guard lock(mu_);
    if (!error_ || key < key_.load(std::memory_order_relaxed)) {
      key_.store(key, std::memory_order_relaxed);
      error_ = std::move(e);
    }
  }
  bool failed_before(std::uint64_t key) const { return key_.load(std::memory_order_relaxed) < key; }
  bool any() const { return static_cast<bool>(error_); }
  std::uint64_t key() const { return key_.load(std::memory_order_relaxed); }
  std::exception_ptr error() const { return error_; }

 private:
  std::mutex mu_;
  std::atomic<std::uint64_t> key_{std::numeric_limits<std::uint64_t>::max()};
  std::exception_ptr error_;
};

// Library errors keep their code and gain `key` if unlocated; anything else becomes `fallback` at `key`.
[[noreturn]] void rethrow_typed(std::exception_ptr e, ErrorCode fallback, std::uint64_t key) {
  try {
    std::rethrow_exception(e);
  } catch (const Error& err) {
    throw err.located(key);
  } catch (const std::exception& ex) {
    throw Error(fallback, ex.what(), key);
  } catch (...) {
    throw Error(fallback, "unknown failure", key);
  }
}

// Runs body(b) for every block. A single worker skips the OpenMP runtime,
// whose per-iteration dispatch would otherwise dominate small blocks.
template <class Body>
void for_each_block(std::int64_t blocks, std::uint32_t workers, Body&& body) {
  if (workers <= 1 || blocks <= 1) {
    for (std::int64_t b = 0; b < blocks; ++b) body(b);
    return;
  }
#pragma omp parallel for schedule(dynamic) num_threads(workers)
  for (std::int64_t b = 0; b < blocks; ++b) body(b);
}

void check_out(std::span<std::uint8_t> out, std::uint64_t n, std::size_t elem_bytes) {
  if (out.size() != n * elem_bytes) {
    throw Error(ErrorCode::InvalidArgument, "output buffer holds " + std::to_string(out.size()) +
                                                " bytes, kernel writes " + std::to_string(n * elem_bytes));
  }
}

}  // namespace

void check_group_offsets(std::span<const std::uint64_t> offsets) {
  if (offsets.empty()) return;
  if (offsets[0] != 0) throw Error(ErrorCode::InvalidArgument, "group offsets must start at 0");
  for (std::size_t g = 1; g < offsets.size(); ++g) {
    if (offsets[g] < offsets[g - 1]) throw Error(ErrorCode::InvalidArgument, "group offsets decrease", g);
  }
}

void run_fully_parallel_into(const FullyParallelKernel& k, const LaunchConfig& cfg,
                             const VirtualDevice& dev, std::span<std::uint8_t> out) {
  dev.validate();
  validate_fully_parallel(cfg, dev, k.out_elem_bytes);
  check_out(out, k.n_out, k.out_elem_bytes);
  const auto grid = static_cast<std::int64_t>(fp_grid_size(k.n_out, cfg));
  const auto tile = fp_tile_size(cfg);
  const auto eb = k.out_elem_bytes;
  FirstFailure failure;

  for_each_block(grid, dev.worker_count, [&](std::int64_t b) {
    const auto block = static_cast<std::uint64_t>(b);
    if (failure.failed_before(block * tile)) return;
    std::uint64_t i = 0;
    try {
      // Lanes of one block advance in lockstep: iteration-major, then lane.
      for (std::uint64_t iter = 0; iter < cfg.L; ++iter) {
        for (std::uint64_t t = 0; t < cfg.S; ++t) {
          const auto begin = block * tile + iter * cfg.S * cfg.C + t * cfg.C;
          const auto end = std::min(begin + cfg.C, k.n_out);
          for (i = begin; i < end; ++i) k.map(i, out.data() + i * eb);
        }
      }
    } catch (...) {
      failure.record(i, std::current_exception());
    }
  });
  if (failure.any()) rethrow_typed(failure.error(), ErrorCode::DecodeError, failure.key());
}

Bytes run_fully_parallel(const FullyParallelKernel& k, const LaunchConfig& cfg, const VirtualDevice& dev) {
  Bytes out(k.n_out * k.out_elem_bytes);
  run_fully_parallel_into(k, cfg, dev, out);
  return out;
}

void run_group_parallel_into(const GroupParallelKernel& k, const LaunchConfig& cfg,
                             const VirtualDevice& dev, std::span<std::uint8_t> out) {
  dev.validate();
  validate_group_parallel(cfg, dev);
  check_group_offsets(k.group_out_offsets);
  check_out(out, k.n_out(), k.out_elem_bytes);
  const auto n_groups = k.n_groups();
  const auto& off = k.group_out_offsets;
  const auto eb = k.out_elem_bytes;
  const auto blocks = static_cast<std::int64_t>(cfg.L);
  FirstFailure failure;

  for_each_block(blocks, dev.worker_count, [&](std::int64_t b) {
    const auto block = static_cast<std::uint64_t>(b);
    std::uint64_t at = 0;
    try {
      for (std::uint64_t h = 0;; ++h) {
        const auto first = gp_first_group(block, h, cfg);
        if (!first || *first >= n_groups) break;
        for (std::uint64_t t = 0; t < cfg.S; ++t) {
          const auto a = gp_try_assignment(block, t, h, cfg, n_groups);
          if (!a) continue;
          const auto base = off[a->group];
          const auto size = off[a->group + 1] - base;
          for (std::uint64_t j = a->lane; j < size; j += cfg.C) {
            at = base + j;
            k.emit(a->group, j, out.data() + at * eb);
          }
        }
      }
    } catch (...) {
      failure.record(at, std::current_exception());
    }
  });
  if (!failure.any()) return;

  // Blocks visit outputs out of order, so find the lowest failing element with
  // one sequential pass.
  std::array<std::uint8_t, 64> scratch_small{};
  Bytes scratch_big(eb > scratch_small.size() ? eb : 0);
  auto* scratch = eb > scratch_small.size() ? scratch_big.data() : scratch_small.data();
  for (std::uint64_t g = 0; g < n_groups; ++g) {
    for (std::uint64_t j = 0; j < off[g + 1] - off[g]; ++j) {
      if (off[g] + j >= failure.key()) rethrow_typed(failure.error(), ErrorCode::DecodeError, failure.key());
      try {
        k.emit(g, j, scratch);
      } catch (...) {
        rethrow_typed(std::current_exception(), ErrorCode::DecodeError, off[g] + j);
      }
    }
  }
  rethrow_typed(failure.error(), ErrorCode::DecodeError, failure.key());
}

Bytes run_group_parallel(const GroupParallelKernel& k, const LaunchConfig& cfg, const VirtualDevice& dev) {
  Bytes out(k.n_out() * k.out_elem_bytes);
  run_group_parallel_into(k, cfg, dev, out);
  return out;
}

void run_non_parallel_into(const NonParallelKernel& k, const LaunchConfig& cfg,
                           const VirtualDevice& dev, std::span<std::uint8_t> out) {
  dev.validate();
  const auto n_chunks = k.n_chunks();
  validate_non_parallel(cfg, dev, n_chunks);
  if (k.chunk_in_offsets.size() != k.chunk_out_offsets.size()) {
    throw Error(ErrorCode::InvalidArgument, "chunk input and output offset tables differ in length");
  }
  for (std::uint64_t c = 0; c < n_chunks; ++c) {
    if (k.chunk_in_offsets[c + 1] < k.chunk_in_offsets[c] || k.chunk_in_offsets[c + 1] > k.input.size()) {
      throw Error(ErrorCode::ChunkDecodeError, "chunk input range outside the payload", c);
    }
    if (k.chunk_out_offsets[c + 1] < k.chunk_out_offsets[c]) {
      throw Error(ErrorCode::ChunkDecodeError, "chunk output range inverted", c);
    }
  }
  if (n_chunks > 0 && k.chunk_out_offsets[0] != 0) {
    throw Error(ErrorCode::InvalidArgument, "chunk output offsets must start at 0");
  }
  check_out(out, k.n_out(), k.out_elem_bytes);
  const auto eb = k.out_elem_bytes;
  const auto per_block = cfg.S * cfg.C;
  const auto blocks = static_cast<std::int64_t>(cfg.L);
  FirstFailure failure;

  for_each_block(blocks, dev.worker_count, [&](std::int64_t b) {
    for (std::uint64_t lane = 0; lane < per_block; ++lane) {
      const auto c = static_cast<std::uint64_t>(b) * per_block + lane;
      if (c >= n_chunks) break;
      const auto in_begin = k.chunk_in_offsets[c];
      const auto out_begin = k.chunk_out_offsets[c];
      try {
        k.decode(c, k.input.subspan(in_begin, k.chunk_in_offsets[c + 1] - in_begin),
                 out.subspan(out_begin * eb, (k.chunk_out_offsets[c + 1] - out_begin) * eb));
      } catch (...) {
        failure.record(c, std::current_exception());
      }
    }
  });
  if (failure.any()) rethrow_typed(failure.error(), ErrorCode::ChunkDecodeError, failure.key());
}

Bytes run_non_parallel(const NonParallelKernel& k, const LaunchConfig& cfg, const VirtualDevice& dev) {
  Bytes out(k.n_out() * k.out_elem_bytes);
  run_non_parallel_into(k, cfg, dev, out);
  return out;
}

double throughput_bound(double mem_bandwidth, double compressed_size, double plain_size) {
  return mem_bandwidth * plain_size / (compressed_size + plain_size);
}

}  // namespace patternpress
