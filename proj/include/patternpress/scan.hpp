#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace patternpress {

enum class ScanMode : std::uint8_t { Inclusive, Exclusive };

/// Inclusive: out[i] = a[0] + ... + a[i] (n entries).
/// Exclusive: out = [0, a[0], a[0]+a[1], ..., total] (n+1 entries).
/// Throws ArithmeticOverflow if any emitted value leaves the int64 range.
std::vector<std::int64_t> prefix_sum(std::span<const std::int64_t> a, ScanMode mode);
std::vector<std::int64_t> prefix_sum(std::span<const std::int64_t> a, ScanMode mode,
                                     std::uint32_t workers);

/// Blocked parallel scan over an arbitrary element reader, starting from
/// `init`. `out` must hold n (Inclusive) or n+1 (Exclusive) entries.
void scan_into(const std::function<std::int64_t(std::uint64_t)>& read, std::uint64_t n,
               ScanMode mode, std::int64_t init, std::span<std::int64_t> out,
               std::uint32_t workers);

}  // namespace patternpress
