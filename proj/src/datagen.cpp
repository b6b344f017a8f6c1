#include "patternpress/datagen.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <numeric>
#include <unordered_set>

namespace patternpress {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed) {
  for (auto& w : s_) w = splitmix64(seed);
}

std::uint64_t Rng::next() {
  const auto result = std::rotl(s_[1] * 5, 7) * 9;
  const auto t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = std::rotl(s_[3], 45);
  return result;
}

std::uint64_t Rng::below(std::uint64_t bound) {
  const auto threshold = (0 - bound) % bound;
  for (;;) {
    const auto r = next();
    if (r >= threshold) return r % bound;
  }
}

std::uint64_t Rng::between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }

double Rng::unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

TypedColumn gen_uniform_bits(std::uint64_t rows, unsigned bit_width, std::uint64_t seed) {
  if (bit_width < 1 || bit_width > 63) throw Error(ErrorCode::InvalidArgument, "bit width must be in [1, 63]");
  Rng rng(seed);
  std::vector<std::int64_t> v(rows);
  for (auto& x : v) x = static_cast<std::int64_t>(rng.next() >> (64 - bit_width));
  return TypedColumn::from_int64(v);
}

RunDist RunDist::even(std::uint64_t x) { return {Kind::Even, x, x, 0, {}}; }
RunDist RunDist::random(std::uint64_t lo, std::uint64_t hi) { return {Kind::Random, lo, hi, 0, {}}; }
RunDist RunDist::outlier(std::uint64_t big, double frac) { return {Kind::Outlier, big, big, frac, {}}; }
RunDist RunDist::mixed(RunDist first, RunDist second) {
  RunDist d{Kind::Mixed, 0, 0, 0, {}};
  d.parts = {std::move(first), std::move(second)};
  return d;
}

namespace {

[[noreturn]] void bad_dist(std::string_view text, std::string_view why) {
  throw Error(ErrorCode::InvalidArgument, "run distribution '" + std::string(text) + "': " + std::string(why));
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto at = s.find(sep, start);
    out.push_back(s.substr(start, at == std::string_view::npos ? std::string_view::npos : at - start));
    if (at == std::string_view::npos) return out;
    start = at + 1;
  }
}

template <typename T>
T number(std::string_view text, std::string_view whole) {
  T v{};
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || end != text.data() + text.size()) bad_dist(whole, "'" + std::string(text) + "' is not a number");
  return v;
}

void check_dist(const RunDist& d, std::string_view text) {
  switch (d.kind) {
    case RunDist::Kind::Even:
      if (d.a == 0) bad_dist(text, "run length must be positive");
      break;
    case RunDist::Kind::Random:
      if (d.a == 0 || d.b < d.a) bad_dist(text, "need 1 <= lo <= hi");
      break;
    case RunDist::Kind::Outlier:
      if (d.a == 0 || !(d.frac >= 0 && d.frac <= 1)) bad_dist(text, "need big >= 1 and 0 <= frac <= 1");
      break;
    case RunDist::Kind::Mixed:
      if (d.parts.size() != 2) bad_dist(text, "mixed needs two parts");
      for (const auto& p : d.parts) check_dist(p, text);
      break;
  }
}

RunDist parse_simple(std::string_view text, std::string_view whole) {
  const auto f = split(text, ':');
  if (f[0] == "even" && f.size() == 2) return RunDist::even(number<std::uint64_t>(f[1], whole));
  if (f[0] == "random" && f.size() == 3) {
    return RunDist::random(number<std::uint64_t>(f[1], whole), number<std::uint64_t>(f[2], whole));
  }
  if (f[0] == "outlier" && f.size() == 3) {
    return RunDist::outlier(number<std::uint64_t>(f[1], whole), number<double>(f[2], whole));
  }
  bad_dist(whole, "expected even:X, random:LO:HI, outlier:BIG:FRAC or mixed:A/B");
}

}  // namespace

RunDist parse_run_dist(std::string_view text) {
  RunDist d;
  if (text.starts_with("mixed:")) {
    const auto halves = split(text.substr(6), '/');
    if (halves.size() != 2) bad_dist(text, "mixed needs two '/'-separated parts");
    d = RunDist::mixed(parse_simple(halves[0], text), parse_simple(halves[1], text));
  } else {
    d = parse_simple(text, text);
  }
  check_dist(d, text);
  return d;
}

std::vector<std::uint64_t> gen_run_lengths(std::uint64_t n_groups, const RunDist& dist, std::uint64_t seed) {
  std::vector<std::uint64_t> out(n_groups);
  Rng rng(seed);
  switch (dist.kind) {
    case RunDist::Kind::Even:
      std::fill(out.begin(), out.end(), dist.a);
      break;
    case RunDist::Kind::Random:
      for (auto& x : out) x = rng.between(dist.a, dist.b);
      break;
    case RunDist::Kind::Outlier: {
      // Exactly round(frac * n) big runs at random positions.
      std::fill(out.begin(), out.end(), 1);
      const auto big = static_cast<std::uint64_t>(std::llround(dist.frac * static_cast<double>(n_groups)));
      std::vector<std::uint64_t> idx(n_groups);
      std::iota(idx.begin(), idx.end(), 0);
      for (std::uint64_t i = 0; i < big; ++i) {
        std::swap(idx[i], idx[i + rng.below(n_groups - i)]);
        out[idx[i]] = dist.a;
      }
      break;
    }
    case RunDist::Kind::Mixed: {
      const auto first = n_groups / 2;
      auto a = gen_run_lengths(first, dist.parts.at(0), seed ^ 0x1111);
      auto b = gen_run_lengths(n_groups - first, dist.parts.at(1), seed ^ 0x2222);
      std::copy(a.begin(), a.end(), out.begin());
      std::copy(b.begin(), b.end(), out.begin() + static_cast<std::ptrdiff_t>(first));
      break;
    }
  }
  return out;
}

TypedColumn gen_rle_groups(std::uint64_t n_groups, const RunDist& dist, std::uint64_t seed) {
  const auto lengths = gen_run_lengths(n_groups, dist, seed);
  Rng rng(seed ^ 0x5EED5EED5EED5EEDULL);
  std::vector<std::int64_t> v;
  v.reserve(std::accumulate(lengths.begin(), lengths.end(), std::uint64_t{0}));
  std::int64_t prev = -1;
  for (auto len : lengths) {
    auto value = static_cast<std::int64_t>(rng.below(std::uint64_t{1} << 20));
    if (value == prev) ++value;
    v.insert(v.end(), len, value);
    prev = value;
  }
  return TypedColumn::from_int64(v);
}

TypedColumn gen_skewed_symbols(std::uint64_t n, const std::vector<double>& ratios, std::uint64_t seed) {
  if (ratios.empty() || ratios.size() > 256) throw Error(ErrorCode::InvalidArgument, "need 1 to 256 symbol ratios");
  double total = 0;
  for (double r : ratios) {
    if (!(r >= 0) || !std::isfinite(r)) throw Error(ErrorCode::InvalidArgument, "ratios must be finite and >= 0");
    total += r;
  }
  if (total <= 0) throw Error(ErrorCode::InvalidArgument, "ratios sum to zero");
  std::vector<double> cdf(ratios.size());
  double acc = 0;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    acc += ratios[i] / total;
    cdf[i] = acc;
  }
  cdf.back() = 1.0;
  Rng rng(seed);
  Bytes out(n);
  for (auto& b : out) {
    const auto u = rng.unit();
    b = static_cast<std::uint8_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
  }
  return TypedColumn(ElementType::fixed_bytes(1), n, std::move(out));
}

double entropy_bits(const std::vector<double>& probabilities) {
  double h = 0;
  for (double p : probabilities) {
    if (p > 0) h -= p * std::log2(p);
  }
  return h;
}

double empirical_entropy_bits(ByteSpan bytes) {
  if (bytes.empty()) return 0;
  std::array<std::uint64_t, 256> counts{};
  for (auto b : bytes) ++counts[b];
  std::vector<double> p;
  for (auto c : counts) {
    if (c) p.push_back(static_cast<double>(c) / static_cast<double>(bytes.size()));
  }
  return entropy_bits(p);
}

std::string_view to_string(TpchKind k) noexcept {
  switch (k) {
    case TpchKind::OrderKeyLike: return "orderkey";
    case TpchKind::DateLike: return "date";
    case TpchKind::DecimalLike: return "decimal";
    case TpchKind::CommentLike: return "comment";
    case TpchKind::FkLike: return "fk";
  }
  return "?";
}

TpchKind parse_tpch_kind(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (c != '_' && c != '-') s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  if (s.ends_with("like")) s.resize(s.size() - 4);
  for (auto k : {TpchKind::OrderKeyLike, TpchKind::DateLike, TpchKind::DecimalLike, TpchKind::CommentLike,
                 TpchKind::FkLike}) {
    if (s == to_string(k)) return k;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown column kind '" + std::string(text) + "'");
}

const std::vector<std::string>& comment_words() {
  static const std::vector<std::string> words = [] {
    static constexpr std::string_view kOnsets[] = {"b", "c", "d", "f", "g", "h", "j", "k", "l", "m", "n",
                                                   "p", "qu", "r", "s", "t", "v", "w", "z", "bl", "br", "ch",
                                                   "cr", "dr", "fl", "fr", "gr", "pl", "pr", "sh", "sl", "st", "th", "tr"};
    static constexpr std::string_view kVowels[] = {"a", "e", "i", "o", "u", "ai", "ea", "io", "ou", "y"};
    static constexpr std::string_view kCodas[] = {"", "", "", "n", "s", "l", "r", "t", "ly", "ng", "x"};
    Rng rng(0xC0FFEE);
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    while (out.size() < kCommentWordPool) {
      std::string w;
      const auto syllables = rng.between(1, 3);
      for (std::uint64_t i = 0; i < syllables; ++i) {
        w += kOnsets[rng.below(std::size(kOnsets))];
        w += kVowels[rng.below(std::size(kVowels))];
      }
      w += kCodas[rng.below(std::size(kCodas))];
      if (seen.insert(w).second) out.push_back(std::move(w));
    }
    return out;
  }();
  return words;
}

TypedColumn gen_tpch_like(TpchKind kind, std::uint64_t rows, std::uint64_t seed) {
  if (rows == 0) throw Error(ErrorCode::InvalidArgument, "rows must be positive");
  Rng rng(seed);
  switch (kind) {
    case TpchKind::OrderKeyLike: {
      // dbgen spreads order keys: 8 used keys out of every 32; each order has
      // 1 to 7 line items.
      std::vector<std::int64_t> v;
      v.reserve(rows);
      for (std::int64_t order = 0; v.size() < rows; ++order) {
        const auto key = (order / 8) * 32 + order % 8 + 1;
        const auto items = rng.between(1, 7);
        for (std::uint64_t i = 0; i < items && v.size() < rows; ++i) v.push_back(key);
      }
      return TypedColumn::from_int64(v);
    }
    case TpchKind::DateLike: {
      constexpr std::int64_t kFirstDay = 8035;  // 1992-01-01 in days since 1970-01-01
      std::vector<std::int64_t> v(rows);
      for (auto& x : v) x = kFirstDay + static_cast<std::int64_t>(rng.below(kDateRangeDays));
      return TypedColumn::from_int64(v);
    }
    case TpchKind::DecimalLike: {
      std::vector<double> v(rows);
      for (auto& x : v) x = static_cast<double>(rng.below(100)) / 100.0;
      return TypedColumn::from_float64(v);
    }
    case TpchKind::CommentLike: {
      const auto& words = comment_words();
      std::vector<std::string> v(rows);
      for (auto& s : v) {
        const auto n = rng.between(3, 10);
        for (std::uint64_t i = 0; i < n; ++i) {
          s += words[rng.below(words.size())];
          s += rng.below(5) == 0 ? ". " : " ";
        }
      }
      return TypedColumn::from_strings(v);
    }
    case TpchKind::FkLike: {
      std::vector<std::int64_t> v(rows);
      for (auto& x : v) x = static_cast<std::int64_t>(rng.between(1, kFkRange));
      return TypedColumn::from_int64(v);
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown column kind");
}

}  // namespace patternpress
