#pragma once

#include <cstdint>
#include <optional>

#include "patternpress/device.hpp"

namespace patternpress {

struct IndexRange {
  std::uint64_t begin = 0;
  std::uint64_t end = 0;
  std::uint64_t size() const noexcept { return end - begin; }
  friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

// ---- FullyParallel -------------------------------------------------------

/// L*S*C elements per block.
std::uint64_t fp_tile_size(const LaunchConfig& cfg) noexcept;
/// ceil(n_out / tile).
std::uint64_t fp_grid_size(std::uint64_t n_out, const LaunchConfig& cfg) noexcept;

/// [block*L*S*C + iter*S*C + thread*C, +C) clamped to n_out. Throws
/// OutOfGeometry when thread >= S or iter >= L.
IndexRange fp_index_range(std::uint64_t block, std::uint64_t thread, std::uint64_t iter,
                          const LaunchConfig& cfg, std::uint64_t n_out);

// ---- GroupParallel -------------------------------------------------------

struct GroupLane {
  std::uint64_t group = 0;
  std::uint64_t lane = 0;
  friend bool operator==(const GroupLane&, const GroupLane&) = default;
};

/// Groups advanced per horizontal iteration. With C >= S this is the number
/// of complete C/S-block teams among the L blocks; with S > C it is L*S/C.
std::uint64_t gp_stride(const LaunchConfig& cfg) noexcept;

/// Maps (block, thread, h_iter) to the group it serves and its lane within the
/// group. Returns nullopt for idle blocks (outside every team), for
/// thread >= S, and when the group is >= n_groups.
std::optional<GroupLane> gp_try_assignment(std::uint64_t block, std::uint64_t thread,
                                           std::uint64_t h_iter, const LaunchConfig& cfg,
                                           std::uint64_t n_groups) noexcept;

/// Throwing form of gp_try_assignment (OutOfGeometry).
GroupLane gp_assignment(std::uint64_t block, std::uint64_t thread, std::uint64_t h_iter,
                        const LaunchConfig& cfg, std::uint64_t n_groups);

/// Smallest group any lane of `block` touches at `h_iter`, or nullopt when
/// the block is idle.
std::optional<std::uint64_t> gp_first_group(std::uint64_t block, std::uint64_t h_iter,
                                            const LaunchConfig& cfg) noexcept;

// ---- NonParallel ---------------------------------------------------------

/// block*(S*C) + lane. Throws OutOfGeometry for lane >= S*C or block >= L.
std::uint64_t np_chunk_id(std::uint64_t block, std::uint64_t lane, const LaunchConfig& cfg);

}  // namespace patternpress
