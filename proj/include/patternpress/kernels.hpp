#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "patternpress/bytes.hpp"
#include "patternpress/device.hpp"

namespace patternpress {

/// Writes output element `index` to `dst` (out_elem_bytes bytes).
using ElementMap = std::function<void(std::uint64_t index, std::uint8_t* dst)>;

/// Writes item `item` of group `group` to `dst`.
using GroupEmit = std::function<void(std::uint64_t group, std::uint64_t item, std::uint8_t* dst)>;

/// Decodes one chunk from its input slice into its output slice.
using ChunkDecoder =
    std::function<void(std::uint64_t chunk, ByteSpan in, std::span<std::uint8_t> out)>;

/// Element-wise map with no cross-element dependency.
struct FullyParallelKernel {
  std::uint64_t n_out = 0;
  std::size_t out_elem_bytes = 8;
  ElementMap map;
};

/// Variable-sized groups; group g owns outputs [offsets[g], offsets[g+1]).
struct GroupParallelKernel {
  std::span<const std::uint64_t> group_out_offsets;  // n_groups + 1 entries
  std::size_t out_elem_bytes = 8;
  GroupEmit emit;

  std::uint64_t n_groups() const noexcept {
    return group_out_offsets.empty() ? 0 : group_out_offsets.size() - 1;
  }
  std::uint64_t n_out() const noexcept {
    return group_out_offsets.empty() ? 0 : group_out_offsets.back();
  }
};

/// Independent sequential chunks. Input offsets are bytes into `input`,
/// output offsets are elements.
struct NonParallelKernel {
  ByteSpan input;
  std::vector<std::uint64_t> chunk_in_offsets;   // n_chunks + 1
  std::vector<std::uint64_t> chunk_out_offsets;  // n_chunks + 1
  std::size_t out_elem_bytes = 1;
  ChunkDecoder decode;

  std::uint64_t n_chunks() const noexcept {
    return chunk_out_offsets.empty() ? 0 : chunk_out_offsets.size() - 1;
  }
  std::uint64_t n_out() const noexcept {
    return chunk_out_offsets.empty() ? 0 : chunk_out_offsets.back();
  }
};

// Each runner validates the config for its pattern, distributes blocks over
// the device's worker lanes, and produces output that does not depend on
// either the config or the device. The first failure (lowest output index or
// chunk id) is rethrown after all lanes stop.

Bytes run_fully_parallel(const FullyParallelKernel& k, const LaunchConfig& cfg, const VirtualDevice& dev);
void run_fully_parallel_into(const FullyParallelKernel& k, const LaunchConfig& cfg,
                             const VirtualDevice& dev, std::span<std::uint8_t> out);

Bytes run_group_parallel(const GroupParallelKernel& k, const LaunchConfig& cfg, const VirtualDevice& dev);
void run_group_parallel_into(const GroupParallelKernel& k, const LaunchConfig& cfg,
                             const VirtualDevice& dev, std::span<std::uint8_t> out);

Bytes run_non_parallel(const NonParallelKernel& k, const LaunchConfig& cfg, const VirtualDevice& dev);
void run_non_parallel_into(const NonParallelKernel& k, const LaunchConfig& cfg,
                           const VirtualDevice& dev, std::span<std::uint8_t> out);

/// Checks that offsets form a valid partition (non-decreasing, starting at 0).
void check_group_offsets(std::span<const std::uint64_t> offsets);

/// Upper bound on decode throughput when every decoded byte costs
/// one compressed read plus one plain write:
///   mem_bandwidth * plain / (compressed + plain)
double throughput_bound(double mem_bandwidth, double compressed_size, double plain_size);

}  // namespace patternpress
