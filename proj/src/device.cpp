#include "patternpress/device.hpp"

#include <omp.h>

#include <algorithm>
#include <cctype>
#include <cstdlib>

#include "patternpress/error.hpp"

namespace patternpress {

namespace {

std::string squash(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == ' ' || c == '-' || c == '_') continue;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

[[noreturn]] void bad_config(const LaunchConfig& cfg, const std::string& why) {
  throw Error(ErrorCode::InvalidConfig, std::string(to_string(cfg.pattern)) + " " + to_string(cfg) + ": " + why);
}

void check_lanes(const LaunchConfig& cfg, const VirtualDevice& dev) {
  if (!is_pow2(cfg.S) || cfg.S < dev.warp_size || cfg.S > kMaxLanes) {
    bad_config(cfg, "S must be a power of two in [" + std::to_string(dev.warp_size) + ", 1024]");
  }
}

void check_pattern(const LaunchConfig& cfg, Pattern want) {
  if (cfg.pattern != want) bad_config(cfg, "config is for another pattern");
}

}  // namespace

std::string_view to_string(Pattern p) noexcept {
  switch (p) {
    case Pattern::FullyParallel: return "FullyParallel";
    case Pattern::GroupParallel: return "GroupParallel";
    case Pattern::NonParallel: return "NonParallel";
  }
  return "?";
}

Pattern parse_pattern(std::string_view text) {
  const auto s = squash(text);
  if (s == "fp" || s == "fullyparallel") return Pattern::FullyParallel;
  if (s == "gp" || s == "groupparallel") return Pattern::GroupParallel;
  if (s == "np" || s == "nonparallel") return Pattern::NonParallel;
  throw Error(ErrorCode::InvalidArgument, "unknown pattern '" + std::string(text) + "'");
}

void VirtualDevice::validate() const {
  if (warp_size != 32 && warp_size != 64) {
    throw Error(ErrorCode::InvalidConfig, "warp size must be 32 or 64");
  }
  if (num_cus == 0) throw Error(ErrorCode::InvalidConfig, "num_cus must be positive");
  if (worker_count == 0) throw Error(ErrorCode::InvalidConfig, "worker_count must be positive");
}

VirtualDevice VirtualDevice::profile(std::string_view name) {
  const auto s = squash(name);
  VirtualDevice d;
  if (s == "a100") {
    d = {"a100", 32, 108, 1};
  } else if (s == "h100") {
    d = {"h100", 32, 132, 1};
  } else if (s == "mi50") {
    d = {"mi50", 64, 60, 1};
  } else if (s == "mi300x") {
    d = {"mi300x", 64, 304, 1};
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown device profile '" + std::string(name) + "'");
  }
  d.worker_count = default_worker_count();
  return d;
}

std::vector<std::string> VirtualDevice::profile_names() { return {"a100", "h100", "mi50", "mi300x"}; }

std::uint32_t default_worker_count() {
  if (const char* env = std::getenv("PATTERNPRESS_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::uint32_t>(v);
  }
  return static_cast<std::uint32_t>(std::max(1, omp_get_max_threads()));
}

std::string to_string(const LaunchConfig& cfg) {
  return "<" + std::to_string(cfg.L) + "," + std::to_string(cfg.S) + "," + std::to_string(cfg.C) + ">";
}

std::uint64_t fp_coop_for(std::size_t elem_bytes) {
  if (elem_bytes == 0) return 1;
  return (4 + elem_bytes - 1) / elem_bytes;
}

std::uint64_t np_block_count(std::size_t n_chunks, std::uint64_t S, std::uint64_t C) {
  const auto per_block = S * C;
  return std::max<std::uint64_t>(1, (n_chunks + per_block - 1) / per_block);
}

void validate_fully_parallel(const LaunchConfig& cfg, const VirtualDevice& dev, std::size_t elem_bytes) {
  check_pattern(cfg, Pattern::FullyParallel);
  if (!is_pow2(cfg.L) || cfg.L > kMaxFpLoops) bad_config(cfg, "L must be a power of two in [1, 16]");
  check_lanes(cfg, dev);
  if (cfg.C != fp_coop_for(elem_bytes)) {
    bad_config(cfg, "C must be " + std::to_string(fp_coop_for(elem_bytes)) + " for " +
                        std::to_string(elem_bytes) + "-byte elements");
  }
}

void validate_group_parallel(const LaunchConfig& cfg, const VirtualDevice& dev) {
  check_pattern(cfg, Pattern::GroupParallel);
  if (cfg.L != dev.num_cus) bad_config(cfg, "L must equal num_cus (" + std::to_string(dev.num_cus) + ")");
  check_lanes(cfg, dev);
  if (!is_pow2(cfg.C) || cfg.C > kMaxCoop) bad_config(cfg, "C must be a power of two in [1, 1024]");
  if (cfg.C % cfg.S != 0 && cfg.S % cfg.C != 0) bad_config(cfg, "C and S must divide one another");
  if (cfg.C > cfg.L * cfg.S) bad_config(cfg, "C exceeds the lanes of all L blocks");
}

void validate_non_parallel(const LaunchConfig& cfg, const VirtualDevice& dev, std::size_t n_chunks) {
  check_pattern(cfg, Pattern::NonParallel);
  if (cfg.S != dev.warp_size) bad_config(cfg, "S must equal the warp size (" + std::to_string(dev.warp_size) + ")");
  if (!is_pow2(cfg.C) || cfg.C > kMaxCoop) bad_config(cfg, "C must be a power of two in [1, 1024]");
  const auto want = np_block_count(n_chunks, cfg.S, cfg.C);
  if (cfg.L != want) {
    bad_config(cfg, "L must be ceil(" + std::to_string(n_chunks) + " chunks / (S*C)) = " + std::to_string(want));
  }
}

LaunchConfig ExecutionConfig::fully_parallel(std::size_t elem_bytes) const {
  return {fp_loops, fp_lanes, fp_coop_for(elem_bytes), Pattern::FullyParallel};
}

LaunchConfig ExecutionConfig::group_parallel(const VirtualDevice& dev) const {
  return {dev.num_cus, gp_lanes, gp_coop, Pattern::GroupParallel};
}

LaunchConfig ExecutionConfig::non_parallel(const VirtualDevice& dev, std::size_t n_chunks) const {
  return {np_block_count(n_chunks, dev.warp_size, np_coop), dev.warp_size, np_coop, Pattern::NonParallel};
}

void ExecutionConfig::apply(const LaunchConfig& cfg) {
  switch (cfg.pattern) {
    case Pattern::FullyParallel:
      fp_loops = cfg.L;
      fp_lanes = cfg.S;
      break;
    case Pattern::GroupParallel:
      gp_lanes = cfg.S;
      gp_coop = cfg.C;
      break;
    case Pattern::NonParallel:
      np_coop = cfg.C;
      break;
  }
}

}  // namespace patternpress
