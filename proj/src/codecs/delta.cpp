#include "patternpress/codecs/delta.hpp"

#include "patternpress/scan.hpp"
#include "record.hpp"

namespace patternpress::codecs {

Bytes DeltaParams::to_record() const {
  ByteWriter w;
  w.put(base);
  return w.take();
}

DeltaParams DeltaParams::from_record(ByteSpan record) {
  auto r = detail::record_reader(record);
  DeltaParams p;
  p.base = r.get<std::int64_t>("delta base");
  detail::finish_record(r, "Delta encoding");
  return p;
}

DeltaEncoded delta_encode(std::span<const std::int64_t> col) {
  DeltaEncoded out;
  if (col.empty()) return out;
  out.params.base = col[0];
  out.deltas.resize(col.size());
  out.deltas[0] = 0;
  for (std::size_t i = 1; i < col.size(); ++i) {
    if (__builtin_sub_overflow(col[i], col[i - 1], &out.deltas[i])) {
      throw Error(ErrorCode::ArithmeticOverflow, "difference leaves the int64 range", i);
    }
  }
  return out;
}

std::vector<std::int64_t> delta_decode(std::span<const std::int64_t> deltas, const DeltaParams& params,
                                       std::uint32_t workers) {
  std::vector<std::int64_t> out(deltas.size());
  const auto* p = deltas.data();
  scan_into([p](std::uint64_t i) { return p[i]; }, deltas.size(), ScanMode::Inclusive, params.base, out,
            workers);
  return out;
}

Bytes RleParams::to_record() const {
  ByteWriter w;
  w.put(n_runs);
  return w.take();
}

RleParams RleParams::from_record(ByteSpan record) {
  auto r = detail::record_reader(record);
  RleParams p;
  p.n_runs = r.get<std::uint64_t>("run count");
  detail::finish_record(r, "RLE");
  return p;
}

RleEncoded rle_encode(std::span<const std::int64_t> col) {
  RleEncoded out;
  for (std::size_t i = 0; i < col.size();) {
    std::size_t j = i + 1;
    while (j < col.size() && col[j] == col[i]) ++j;
    out.values.push_back(col[i]);
    out.counts.push_back(static_cast<std::int64_t>(j - i));
    i = j;
  }
  return out;
}

std::vector<std::uint64_t> group_offsets_from_counts(const Operand& counts, std::uint32_t workers,
                                                     std::optional<std::uint64_t> expected_total) {
  const auto n = counts.count();
  std::vector<std::int64_t> scanned(n + 1);
  const auto& read = counts.reader();
  try {
    scan_into([&read](std::uint64_t i) { return static_cast<std::int64_t>(read(i)); }, n, ScanMode::Exclusive,
              0, scanned, workers);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ArithmeticOverflow) throw;
    throw Error(ErrorCode::CountOverflow, "run counts overflow the output index", e.where());
  }
  std::vector<std::uint64_t> offsets(n + 1);
  for (std::uint64_t g = 0; g <= n; ++g) {
    if (g > 0 && scanned[g] < scanned[g - 1]) throw Error(ErrorCode::CountOverflow, "negative run count", g - 1);
    offsets[g] = static_cast<std::uint64_t>(scanned[g]);
  }
  if (expected_total && offsets[n] != *expected_total) {
    throw Error(ErrorCode::CountOverflow, "run counts sum to " + std::to_string(offsets[n]) + ", expected " +
                                              std::to_string(*expected_total));
  }
  return offsets;
}

GroupEmit rle_emit(Operand values) {
  if (values.materialized() && values.elem_bytes() == 8) {
    const auto* p = values.bytes().data();
    return [p](std::uint64_t g, std::uint64_t, std::uint8_t* dst) { std::memcpy(dst, p + 8 * g, 8); };
  }
  return [values = std::move(values)](std::uint64_t g, std::uint64_t, std::uint8_t* dst) {
    store_le(dst, values.word(g));
  };
}

namespace {

void same_length(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw Error(ErrorCode::TruncatedStream,
                std::string(what) + " streams differ in length (" + std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

GroupPlan rle_decode_plan(std::span<const std::int64_t> values, std::span<const std::int64_t> counts,
                          std::uint32_t workers) {
  same_length(values.size(), counts.size(), "RLE value and count");
  GroupPlan plan;
  plan.offsets = group_offsets_from_counts(Operand::buffer(detail::as_bytes(counts), 8, counts.size()), workers);
  plan.emit = rle_emit(Operand::buffer(detail::as_bytes(values), 8, values.size()));
  return plan;
}

DeltaStrideEncoded deltastride_encode(std::span<const std::int64_t> col) {
  DeltaStrideEncoded out;
  const auto n = col.size();
  auto diff = [&](std::size_t i) {
    return static_cast<std::int64_t>(static_cast<std::uint64_t>(col[i]) - static_cast<std::uint64_t>(col[i - 1]));
  };
  for (std::size_t i = 0; i < n;) {
    std::int64_t stride = 0;
    std::size_t j = i + 1;
    if (j < n) {
      stride = diff(j);
      ++j;
      while (j < n && diff(j) == stride) ++j;
    }
    out.starts.push_back(col[i]);
    out.strides.push_back(stride);
    out.counts.push_back(static_cast<std::int64_t>(j - i));
    i = j;
  }
  return out;
}

GroupEmit deltastride_emit(Operand starts, Operand strides) {
  return [starts = std::move(starts), strides = std::move(strides)](std::uint64_t g, std::uint64_t j,
                                                                    std::uint8_t* dst) {
    store_le(dst, starts.word(g) + j * strides.word(g));
  };
}

GroupPlan deltastride_decode_plan(std::span<const std::int64_t> starts, std::span<const std::int64_t> strides,
                                  std::span<const std::int64_t> counts, std::uint32_t workers) {
  same_length(starts.size(), counts.size(), "DeltaStride start and count");
  same_length(strides.size(), counts.size(), "DeltaStride stride and count");
  GroupPlan plan;
  plan.offsets = group_offsets_from_counts(Operand::buffer(detail::as_bytes(counts), 8, counts.size()), workers);
  plan.emit = deltastride_emit(Operand::buffer(detail::as_bytes(starts), 8, starts.size()),
                               Operand::buffer(detail::as_bytes(strides), 8, strides.size()));
  return plan;
}

}  // namespace patternpress::codecs
