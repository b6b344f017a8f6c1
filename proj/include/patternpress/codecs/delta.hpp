#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "patternpress/bytes.hpp"
#include "patternpress/kernels.hpp"
#include "patternpress/operand.hpp"

namespace patternpress::codecs {

struct DeltaParams {
  std::int64_t base = 0;

  Bytes to_record() const;
  static DeltaParams from_record(ByteSpan record);
};

struct DeltaEncoded {
  std::vector<std::int64_t> deltas;  // deltas[0] == 0
  DeltaParams params;                // base == first value
};

/// deltas[i] = col[i] - col[i-1], deltas[0] = 0. Decoding is an inclusive
/// scan seeded with base. Throws ArithmeticOverflow if a difference overflows.
DeltaEncoded delta_encode(std::span<const std::int64_t> col);

/// Decode: inclusive prefix sum of the deltas seeded with base.
std::vector<std::int64_t> delta_decode(std::span<const std::int64_t> deltas,
                                       const DeltaParams& params, std::uint32_t workers);

/// Run-length encoding into maximal runs.
struct RleEncoded {
  std::vector<std::int64_t> values;
  std::vector<std::int64_t> counts;
};

struct RleParams {
  std::uint64_t n_runs = 0;

  Bytes to_record() const;
  static RleParams from_record(ByteSpan record);
};

RleEncoded rle_encode(std::span<const std::int64_t> col);

/// Output of the prefix-sum step plus the emit function of the expansion.
struct GroupPlan {
  std::vector<std::uint64_t> offsets;  // exclusive scan of counts
  GroupEmit emit;
  std::size_t out_elem_bytes = 8;

  /// The returned kernel views `offsets`; keep the plan alive while it runs.
  GroupParallelKernel kernel() const { return {offsets, out_elem_bytes, emit}; }
};

/// Exclusive scan of counts; throws CountOverflow on negative counts, on
/// overflow, or when the total differs from expected_total (if given).
std::vector<std::uint64_t> group_offsets_from_counts(const Operand& counts,
                                                     std::uint32_t workers,
                                                     std::optional<std::uint64_t> expected_total = {});

/// emit(g, j) = values[g].
GroupEmit rle_emit(Operand values);
GroupPlan rle_decode_plan(std::span<const std::int64_t> values,
                          std::span<const std::int64_t> counts, std::uint32_t workers);

/// Arithmetic runs as (start, stride, count) triples.
struct DeltaStrideEncoded {
  std::vector<std::int64_t> starts;
  std::vector<std::int64_t> strides;
  std::vector<std::int64_t> counts;
};

using DeltaStrideParams = RleParams;

/// Greedy maximal runs: a run's stride is fixed by its first two elements and
/// it extends while consecutive differences equal that stride. Singletons get
/// stride 0.
DeltaStrideEncoded deltastride_encode(std::span<const std::int64_t> col);

/// emit(g, j) = starts[g] + j * strides[g] (wrapping arithmetic).
GroupEmit deltastride_emit(Operand starts, Operand strides);
GroupPlan deltastride_decode_plan(std::span<const std::int64_t> starts,
                                  std::span<const std::int64_t> strides,
                                  std::span<const std::int64_t> counts, std::uint32_t workers);

}  // namespace patternpress::codecs
