#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "patternpress/datamodel.hpp"
#include "patternpress/device.hpp"

namespace patternpress {

/// One column to move over the link and then decode.
struct TransferJob {
  std::string id;
  double transfer_cost = 0;    // seconds, stage 1
  double decompress_cost = 0;  // seconds, stage 2
};

struct JobTimeline {
  std::string id;
  double transfer_start = 0;
  double transfer_end = 0;
  double decompress_start = 0;
  double decompress_end = 0;
};

struct ScheduleResult {
  std::vector<std::size_t> order;  // indices into the job list
  double makespan = 0;
  std::vector<JobTimeline> timeline;  // in execution order
};

/// Johnson's rule: jobs with transfer <= decompress first by ascending
/// transfer, then the rest by descending decompress; ties by ascending id.
std::vector<std::size_t> johnson_order(const std::vector<TransferJob>& jobs);

/// Two-machine flow shop with one serial link and one serial decoder.
/// Throws InvalidArgument unless `order` is a permutation of the jobs.
ScheduleResult simulate_pipeline(const std::vector<TransferJob>& jobs,
                                 const std::vector<std::size_t>& order);

/// Exhaustive minimum over all permutations (small n only; throws
/// InvalidArgument above 10 jobs).
ScheduleResult brute_force_schedule(const std::vector<TransferJob>& jobs);

/// transfer = compressed / link, decompress = plain / decode rate.
TransferJob estimate_job(std::string id, const CompressedArtifact& artifact,
                         double link_bandwidth, double decode_rate);

/// Plain bytes per second of decoding `artifact` on `dev`, median of `reps`.
double measure_decode_rate(const CompressedArtifact& artifact, const VirtualDevice& dev, int reps = 3);

struct OverlapJob {
  std::string id;
  Bytes container;  // serialized ZDMV
};

struct OverlapResult {
  std::vector<TypedColumn> columns;  // in job-list order
  double makespan = 0;               // seconds, wall clock
  std::vector<JobTimeline> timeline; // measured, in execution order
};

/// Stage 1 copies each container into staging memory at `link_bandwidth`
/// bytes/sec; stage 2 deserializes and decodes. The stages run on two threads
/// joined by an unbounded queue. Decode errors are rethrown prefixed with the
/// job id.
OverlapResult run_overlapped(const std::vector<OverlapJob>& jobs,
                             const std::vector<std::size_t>& order, double link_bandwidth,
                             const VirtualDevice& dev);

}  // namespace patternpress
