#include "patternpress/scan.hpp"

#include <algorithm>
#include <exception>
#include <limits>
#include <string>

#include "patternpress/error.hpp"

namespace patternpress {

namespace {

using Wide = __int128;

constexpr Wide kMin = std::numeric_limits<std::int64_t>::min();
constexpr Wide kMax = std::numeric_limits<std::int64_t>::max();
constexpr std::uint64_t kSerialCutoff = 1 << 15;

std::int64_t narrow(Wide v, std::uint64_t i) {
  if (v < kMin || v > kMax) throw Error(ErrorCode::ArithmeticOverflow, "prefix sum leaves the int64 range", i);
  return static_cast<std::int64_t>(v);
}

}  // namespace

std::vector<std::int64_t> prefix_sum(std::span<const std::int64_t> a, ScanMode mode) {
  std::vector<std::int64_t> out(mode == ScanMode::Exclusive ? a.size() + 1 : a.size());
  std::int64_t acc = 0;
  std::size_t w = 0;
  if (mode == ScanMode::Exclusive) out[w++] = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (__builtin_add_overflow(acc, a[i], &acc)) {
      throw Error(ErrorCode::ArithmeticOverflow, "prefix sum leaves the int64 range", i);
    }
    out[w++] = acc;
  }
  return out;
}

std::vector<std::int64_t> prefix_sum(std::span<const std::int64_t> a, ScanMode mode,
                                     std::uint32_t workers) {
  std::vector<std::int64_t> out(mode == ScanMode::Exclusive ? a.size() + 1 : a.size());
  const auto* p = a.data();
  scan_into([p](std::uint64_t i) { return p[i]; }, a.size(), mode, 0, out, workers);
  return out;
}

void scan_into(const std::function<std::int64_t(std::uint64_t)>& read, std::uint64_t n,
               ScanMode mode, std::int64_t init, std::span<std::int64_t> out,
               std::uint32_t workers) {
  const bool excl = mode == ScanMode::Exclusive;
  if (out.size() != (excl ? n + 1 : n)) {
    throw Error(ErrorCode::InvalidArgument, "scan output holds " + std::to_string(out.size()) + " entries");
  }
  const std::size_t shift = excl ? 1 : 0;
  if (excl) out[0] = init;

  if (workers <= 1 || n < kSerialCutoff) {
    Wide acc = init;
    for (std::uint64_t i = 0; i < n; ++i) {
      acc += read(i);
      out[i + shift] = narrow(acc, i);
    }
    return;
  }

  // Reduce each block, scan the block totals, then rescan each block from
  // its carried-in offset. Failures are raised after each parallel region so
  // the lowest index wins.
  const std::uint64_t parts = std::min<std::uint64_t>(static_cast<std::uint64_t>(workers) * 4, n);
  const std::uint64_t span = (n + parts - 1) / parts;
  std::vector<Wide> totals(parts, 0);
  std::vector<std::uint64_t> bad(parts, n);
  std::vector<std::exception_ptr> errors(parts);
  const auto np = static_cast<std::int64_t>(parts);
  auto raise_first = [&] {
    const auto first = std::min_element(bad.begin(), bad.end());
    if (*first >= n) return;
    const auto& e = errors[static_cast<std::size_t>(first - bad.begin())];
    if (e) std::rethrow_exception(e);
    throw Error(ErrorCode::ArithmeticOverflow, "prefix sum leaves the int64 range", *first);
  };

#pragma omp parallel for schedule(static) num_threads(workers)
  for (std::int64_t b = 0; b < np; ++b) {
    const auto lo = static_cast<std::uint64_t>(b) * span;
    const auto hi = std::min(n, lo + span);
    Wide s = 0;
    auto i = lo;
    try {
      for (; i < hi; ++i) s += read(i);
    } catch (...) {
      bad[static_cast<std::size_t>(b)] = i;
      errors[static_cast<std::size_t>(b)] = std::current_exception();
    }
    totals[static_cast<std::size_t>(b)] = s;
  }
  raise_first();

  Wide carry = init;
  for (auto& t : totals) {
    const Wide s = t;
    t = carry;
    carry += s;
  }

#pragma omp parallel for schedule(static) num_threads(workers)
  for (std::int64_t b = 0; b < np; ++b) {
    const auto lo = static_cast<std::uint64_t>(b) * span;
    const auto hi = std::min(n, lo + span);
    Wide acc = totals[static_cast<std::size_t>(b)];
    auto i = lo;
    try {
      for (; i < hi; ++i) {
        acc += read(i);
        if (acc < kMin || acc > kMax) {
          bad[static_cast<std::size_t>(b)] = i;
          break;
        }
        out[i + shift] = static_cast<std::int64_t>(acc);
      }
    } catch (...) {
      bad[static_cast<std::size_t>(b)] = i;
      errors[static_cast<std::size_t>(b)] = std::current_exception();
    }
  }
  raise_first();
}

}  // namespace patternpress
