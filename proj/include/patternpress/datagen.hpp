#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "patternpress/datamodel.hpp"

namespace patternpress {

/// xoshiro256** seeded through splitmix64.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t next();
  /// Uniform in [0, bound) by rejection; bound > 0.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform in [lo, hi].
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi);
  /// Uniform double in [0, 1) from the top 53 bits.
  double unit();

 private:
  std::array<std::uint64_t, 4> s_{};
};

std::uint64_t splitmix64(std::uint64_t& state);

/// Values uniform in [0, 2^bit_width); 1 <= bit_width <= 63.
TypedColumn gen_uniform_bits(std::uint64_t rows, unsigned bit_width, std::uint64_t seed);

struct RunDist {
  enum class Kind : std::uint8_t { Even, Random, Outlier, Mixed };
  Kind kind = Kind::Even;
  std::uint64_t a = 2;    // Even: length; Random: lo; Outlier: big length
  std::uint64_t b = 2;    // Random: hi
  double frac = 0.01;     // Outlier: fraction of big runs
  std::vector<RunDist> parts;  // Mixed: two sub-distributions, each for half the groups

  static RunDist even(std::uint64_t x);
  static RunDist random(std::uint64_t lo, std::uint64_t hi);
  static RunDist outlier(std::uint64_t big, double frac);
  static RunDist mixed(RunDist first, RunDist second);
};

/// "even:2", "random:1:64", "outlier:1024:0.01", "mixed:even:2/random:1:8".
/// Throws InvalidArgument.
RunDist parse_run_dist(std::string_view text);

/// Run lengths the generator draws, in order.
std::vector<std::uint64_t> gen_run_lengths(std::uint64_t n_groups, const RunDist& dist, std::uint64_t seed);

/// Runs with the drawn lengths; adjacent run values always differ.
TypedColumn gen_rle_groups(std::uint64_t n_groups, const RunDist& dist, std::uint64_t seed);

/// FixedBytes(1) column; byte value i has probability ratios[i] (normalized).
/// Throws InvalidArgument for empty, negative or more than 256 ratios.
TypedColumn gen_skewed_symbols(std::uint64_t n, const std::vector<double>& ratios, std::uint64_t seed);

/// Shannon entropy in bits per symbol.
double entropy_bits(const std::vector<double>& probabilities);
/// Entropy of the empirical byte distribution.
double empirical_entropy_bits(ByteSpan bytes);

enum class TpchKind : std::uint8_t { OrderKeyLike, DateLike, DecimalLike, CommentLike, FkLike };
std::string_view to_string(TpchKind k) noexcept;
TpchKind parse_tpch_kind(std::string_view text);

inline constexpr std::size_t kCommentWordPool = 1500;
inline constexpr std::int64_t kDateRangeDays = 2526;
inline constexpr std::int64_t kFkRange = 200000;

TypedColumn gen_tpch_like(TpchKind kind, std::uint64_t rows, std::uint64_t seed);

/// The bundled pseudo-word vocabulary used by CommentLike.
const std::vector<std::string>& comment_words();

}  // namespace patternpress
