#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "patternpress/datamodel.hpp"
#include "patternpress/device.hpp"
#include "patternpress/kernels.hpp"
#include "patternpress/operand.hpp"
#include "patternpress/pipeline.hpp"
#include "patternpress/scan.hpp"

namespace patternpress {

// ---- encode ---------------------------------------------------------------

/// Applies the pipeline outer-to-inner; each codec output is encoded by the
/// matching child and Raw leaves capture the final streams. Throws
/// TypeMismatch and codec errors prefixed with the codec path.
CompressedArtifact compile_encode(const PipelineSpec& spec, const TypedColumn& col);

/// Bytes a Raw leaf stores for a column (VarBytes: offsets, then payload).
Bytes raw_stream_bytes(const TypedColumn& col);

// ---- decode plan ------------------------------------------------------------

enum class StepKind : std::uint8_t { Load, FullyParallel, Scan, GroupParallel, NonParallel, Assemble };
std::string_view to_string(StepKind kind) noexcept;

/// Turns the raw operand list of a step into the list its builder expects.
/// Fusion installs adapters that evaluate absorbed producers lazily.
using OperandAdapter = std::function<std::vector<Operand>(std::span<const Operand>)>;

using FpBuilder = std::function<ElementMap(std::span<const Operand>)>;
using WordBuilder = std::function<WordReader(std::span<const Operand>)>;
using GpBuilder = std::function<GroupEmit(std::span<const Operand>)>;
using NpBuilder = std::function<NonParallelKernel(std::span<const Operand>)>;

struct PlanStep {
  StepKind kind = StepKind::Load;
  std::string label;                 // e.g. "bitpack.unpack", "rle.offsets"
  std::vector<std::size_t> inputs;   // slot ids
  std::vector<bool> fusable;         // per input: may be replaced by a lazy producer
  std::size_t output = 0;            // slot id
  std::uint64_t out_count = 0;       // elements
  std::size_t out_elem_bytes = 8;
  /// Dict lookup / Float2Int: the stage does not compress, so the traffic
  /// model charges its input boundary at plain size.
  bool non_compressing = false;

  std::size_t stream_index = 0;      // Load
  ElementType load_type{};           // Load
  ScanMode scan_mode = ScanMode::Exclusive;  // Scan
  std::int64_t scan_init = 0;                // Scan
  std::optional<std::uint64_t> scan_expected_total;  // Scan (exclusive, group offsets)

  FpBuilder fp;                      // FullyParallel
  WordBuilder fp_words;              // optional direct word form of fp, used when fused
  GpBuilder gp;                      // GroupParallel; inputs[0] is the offsets slot
  NpBuilder np;                      // NonParallel
  OperandAdapter adapt;              // identity when empty
  std::vector<std::string> absorbed; // labels of fused producers, innermost first
};

struct DecodePlan {
  std::vector<PlanStep> steps;  // topological order
  std::size_t slot_count = 0;
  std::size_t result = 0;       // slot holding the decoded column
  ElementType type{};
  std::uint64_t count = 0;

  /// Steps other than Load and Assemble (the kernels a device would launch).
  std::size_t kernel_count() const;
  /// Slots written by one compute step and read by another.
  std::size_t materialized_intermediates() const;
};

/// Inverse plan of the artifact's codec tree, innermost streams first.
DecodePlan compile_decode(const CompressedArtifact& artifact);

/// Rule-based fusion: a FullyParallel producer is folded into each
/// FullyParallel consumer, GroupParallel value input or scan input that reads
/// it; with several consumers it is recomputed inside each one. Other steps
/// pass through unchanged.
DecodePlan fuse(DecodePlan plan);

/// Runs the plan on the virtual device.
TypedColumn execute_plan(const DecodePlan& plan, const CompressedArtifact& artifact,
                         const VirtualDevice& dev, const ExecutionConfig& cfg);

/// compile_decode (+ fuse) + execute_plan + checksum check (ChecksumMismatch).
TypedColumn decode_artifact(const CompressedArtifact& artifact, const VirtualDevice& dev,
                            const ExecutionConfig& cfg = {}, bool fused = true);

/// One-line-per-step description used by `inspect` and in tests.
std::string describe_plan(const DecodePlan& plan);

// ---- traffic model ---------------------------------------------------------

struct TrafficEstimate {
  double fused_bytes = 0;
  double unfused_bytes = 0;
  double ratio = 1;  // unfused / fused
};

/// Off-chip traffic of a decode: compressed + plain, plus a write and a read
/// of every intermediate still materialized. Boundaries feeding a
/// non-compressing stage are charged at plain size; the rest at their actual
/// size. `plan` is the unfused plan; the fused side is fuse(plan).
TrafficEstimate traffic_model(const DecodePlan& plan, double compressed_size, double plain_size);

/// Traffic of a single plan as given.
double plan_traffic(const DecodePlan& plan, double compressed_size, double plain_size);

}  // namespace patternpress
