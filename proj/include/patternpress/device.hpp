#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace patternpress {

enum class Pattern : std::uint8_t { FullyParallel = 0, GroupParallel = 1, NonParallel = 2 };

std::string_view to_string(Pattern p) noexcept;
/// Accepts "fp"/"gp"/"np" and the long names; throws InvalidArgument.
Pattern parse_pattern(std::string_view text);

/// A SIMT device emulated on host threads. Blocks become tasks on
/// `worker_count` host lanes; the lanes of one block run as a sequential loop.
struct VirtualDevice {
  std::string name = "a100";
  std::uint32_t warp_size = 32;
  std::uint32_t num_cus = 108;
  std::uint32_t worker_count = 1;

  void validate() const;

  /// Named profiles: a100, h100 (warp 32); mi50, mi300x (warp 64). Worker
  /// count comes from default_worker_count().
  static VirtualDevice profile(std::string_view name);
  static std::vector<std::string> profile_names();
};

/// PATTERNPRESS_WORKERS if set and positive, otherwise the OpenMP thread limit.
std::uint32_t default_worker_count();

/// The <L,S,C> launch geometry. Meaning per pattern:
///   FullyParallel: L loop iterations per block, S lanes per block, C elements per lane step.
///   GroupParallel: L issued blocks, S lanes per block, C lanes cooperating on one group.
///   NonParallel:   L issued blocks, S lanes per block, C chunks per lane slot (S*C chunks per block).
struct LaunchConfig {
  std::uint64_t L = 1;
  std::uint64_t S = 32;
  std::uint64_t C = 1;
  Pattern pattern = Pattern::FullyParallel;

  friend bool operator==(const LaunchConfig&, const LaunchConfig&) = default;
};

std::string to_string(const LaunchConfig& cfg);

inline constexpr std::uint64_t kMaxLanes = 1024;
inline constexpr std::uint64_t kMaxFpLoops = 16;
inline constexpr std::uint64_t kMaxCoop = 1024;

constexpr bool is_pow2(std::uint64_t v) noexcept { return v != 0 && (v & (v - 1)) == 0; }

/// ceil(4 / elem_bytes): the fixed FullyParallel C for an element size.
std::uint64_t fp_coop_for(std::size_t elem_bytes);

/// ceil(n_chunks / (S*C)), at least 1.
std::uint64_t np_block_count(std::size_t n_chunks, std::uint64_t S, std::uint64_t C);

// Launch geometry validity. Each throws InvalidConfig naming the violated rule.
void validate_fully_parallel(const LaunchConfig& cfg, const VirtualDevice& dev, std::size_t elem_bytes);
void validate_group_parallel(const LaunchConfig& cfg, const VirtualDevice& dev);
void validate_non_parallel(const LaunchConfig& cfg, const VirtualDevice& dev, std::size_t n_chunks);

/// Geometry choices for every pattern a decode plan may launch. FullyParallel
/// C, GroupParallel L and NonParallel S/L are derived from the device and the
/// step, so they are not stored here.
struct ExecutionConfig {
  std::uint64_t fp_loops = 4;
  std::uint64_t fp_lanes = 256;
  std::uint64_t gp_lanes = 256;
  std::uint64_t gp_coop = 32;
  std::uint64_t np_coop = 1;

  LaunchConfig fully_parallel(std::size_t elem_bytes) const;
  LaunchConfig group_parallel(const VirtualDevice& dev) const;
  LaunchConfig non_parallel(const VirtualDevice& dev, std::size_t n_chunks) const;

  /// Replaces the fields this pattern controls with the ones in `cfg`.
  void apply(const LaunchConfig& cfg);

  friend bool operator==(const ExecutionConfig&, const ExecutionConfig&) = default;
};

}  // namespace patternpress
