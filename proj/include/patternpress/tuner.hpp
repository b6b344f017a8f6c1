#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "patternpress/datamodel.hpp"
#include "patternpress/device.hpp"

namespace patternpress {

struct ConfigSpace {
  Pattern pattern = Pattern::FullyParallel;
  VirtualDevice device{};
  std::size_t elem_bytes = 8;  // FullyParallel: fixes C
  std::size_t n_chunks = 1;    // NonParallel: derives L
};

/// Lattice points per dimension, in ascending order. Fixed dimensions have a
/// single point.
struct SpaceAxes {
  std::vector<std::uint64_t> L, S, C;
};

SpaceAxes space_axes(const ConfigSpace& space);

/// Valid points of the cross product, L-major then S then C.
std::vector<LaunchConfig> enumerate_space(const ConfigSpace& space);

/// A decode prepared once and re-run per config. `run` executes one decode
/// under the config and returns the plain bytes produced.
struct BenchKernel {
  std::string name;
  ConfigSpace space;
  std::uint64_t plain_bytes = 0;
  std::function<void(const LaunchConfig&)> run;
};

/// Throughput (bytes/sec) of one config; injectable so tests can plant a
/// metric surface.
using MetricFn = std::function<double(const LaunchConfig&)>;

/// Median of `reps` timed runs, reported as plain bytes per second.
MetricFn timed_metric(const BenchKernel& kernel, int reps);

struct TraceEntry {
  LaunchConfig config;
  double metric = 0;
};

struct SearchReport {
  LaunchConfig best_config{};
  double best_metric = 0;
  std::size_t evaluations = 0;
  std::vector<TraceEntry> trace;
};

SearchReport brute_force_search(const ConfigSpace& space, const MetricFn& metric);

/// Coordinate descent S, then C, then L. Each free axis is swept upward from
/// its smallest point while the metric improves; the sweep stops at the first
/// decline or invalid point and the best point is fixed. Configs already
/// evaluated are not re-run. With a noise margin m, a drop to no less than
/// (1 - m) of the previous point does not count as a decline, and a sweep
/// also stops after two points that fail to beat its best by more than m.
SearchReport pruned_search(const ConfigSpace& space, const MetricFn& metric, double noise_margin = 0);

// Shipped benchmark kernels. Each owns its encoded data.
BenchKernel make_bitunpack_kernel(std::uint64_t rows, unsigned bit_width, std::uint64_t seed,
                                  const VirtualDevice& dev);
BenchKernel make_rle_kernel(std::uint64_t groups, std::uint64_t run_lo, std::uint64_t run_hi,
                            std::uint64_t seed, const VirtualDevice& dev);
BenchKernel make_ans_kernel(std::uint64_t bytes, std::uint64_t seed, const VirtualDevice& dev,
                            std::uint32_t chunk_size = 4096);

/// Kernel that decodes the single pattern step of `artifact` matching
/// `pattern`; throws InvalidArgument when the artifact has no such step.
BenchKernel make_artifact_kernel(const CompressedArtifact& artifact, Pattern pattern,
                                 const VirtualDevice& dev);

using KernelFactory = std::function<BenchKernel(const VirtualDevice&)>;

struct CrossDeviceReport {
  std::vector<std::string> devices;
  /// efficiency[i][j]: throughput of device i's native config run on device j,
  /// divided by device j's native throughput. nullopt where the config is not
  /// valid on device j.
  std::vector<std::vector<std::optional<double>>> efficiency;
};

CrossDeviceReport cross_device_report(const std::map<std::string, LaunchConfig>& native,
                                      const KernelFactory& factory,
                                      const std::vector<VirtualDevice>& devices, int reps);

}  // namespace patternpress
