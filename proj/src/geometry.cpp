#include "patternpress/geometry.hpp"

#include <algorithm>

#include "patternpress/error.hpp"

namespace patternpress {

std::uint64_t fp_tile_size(const LaunchConfig& cfg) noexcept { return cfg.L * cfg.S * cfg.C; }

std::uint64_t fp_grid_size(std::uint64_t n_out, const LaunchConfig& cfg) noexcept {
  const auto tile = fp_tile_size(cfg);
  return (n_out + tile - 1) / tile;
}

IndexRange fp_index_range(std::uint64_t block, std::uint64_t thread, std::uint64_t iter,
                          const LaunchConfig& cfg, std::uint64_t n_out) {
  if (thread >= cfg.S) throw Error(ErrorCode::OutOfGeometry, "thread " + std::to_string(thread) + " >= S");
  if (iter >= cfg.L) throw Error(ErrorCode::OutOfGeometry, "iteration " + std::to_string(iter) + " >= L");
  const auto begin = block * fp_tile_size(cfg) + iter * cfg.S * cfg.C + thread * cfg.C;
  return {std::min(begin, n_out), std::min(begin + cfg.C, n_out)};
}

std::uint64_t gp_stride(const LaunchConfig& cfg) noexcept {
  if (cfg.C >= cfg.S) return cfg.L / (cfg.C / cfg.S);
  return cfg.L * (cfg.S / cfg.C);
}

std::optional<std::uint64_t> gp_first_group(std::uint64_t block, std::uint64_t h_iter,
                                            const LaunchConfig& cfg) noexcept {
  const auto stride = gp_stride(cfg);
  if (cfg.C >= cfg.S) {
    const auto team = block / (cfg.C / cfg.S);
    if (team >= stride) return std::nullopt;
    return team + h_iter * stride;
  }
  return block * (cfg.S / cfg.C) + h_iter * stride;
}

std::optional<GroupLane> gp_try_assignment(std::uint64_t block, std::uint64_t thread,
                                           std::uint64_t h_iter, const LaunchConfig& cfg,
                                           std::uint64_t n_groups) noexcept {
  if (thread >= cfg.S || cfg.C == 0 || cfg.S == 0) return std::nullopt;
  GroupLane a;
  if (cfg.C >= cfg.S) {
    const auto per_group = cfg.C / cfg.S;
    const auto team = block / per_group;
    if (team >= gp_stride(cfg)) return std::nullopt;
    a.group = team + h_iter * gp_stride(cfg);
    a.lane = (block % per_group) * cfg.S + thread;
  } else {
    a.group = block * (cfg.S / cfg.C) + thread / cfg.C + h_iter * gp_stride(cfg);
    a.lane = thread % cfg.C;
  }
  if (a.group >= n_groups) return std::nullopt;
  return a;
}

GroupLane gp_assignment(std::uint64_t block, std::uint64_t thread, std::uint64_t h_iter,
                        const LaunchConfig& cfg, std::uint64_t n_groups) {
  if (auto a = gp_try_assignment(block, thread, h_iter, cfg, n_groups)) return *a;
  throw Error(ErrorCode::OutOfGeometry,
              "block " + std::to_string(block) + " thread " + std::to_string(thread) + " iteration " +
                  std::to_string(h_iter) + " serves no group");
}

std::uint64_t np_chunk_id(std::uint64_t block, std::uint64_t lane, const LaunchConfig& cfg) {
  if (lane >= cfg.S * cfg.C) throw Error(ErrorCode::OutOfGeometry, "lane " + std::to_string(lane) + " >= S*C");
  if (block >= cfg.L) throw Error(ErrorCode::OutOfGeometry, "block " + std::to_string(block) + " >= L");
  return block * cfg.S * cfg.C + lane;
}

}  // namespace patternpress
