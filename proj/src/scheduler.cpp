#include "patternpress/scheduler.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <mutex>
#include <numeric>
#include <thread>

#include "patternpress/container.hpp"
#include "patternpress/plan.hpp"

namespace patternpress {

namespace {

void check_permutation(std::size_t n, const std::vector<std::size_t>& order) {
  if (order.size() != n) throw Error(ErrorCode::InvalidArgument, "order length differs from job count");
  std::vector<bool> seen(n, false);
  for (auto i : order) {
    if (i >= n || seen[i]) throw Error(ErrorCode::InvalidArgument, "order is not a permutation of the jobs");
    seen[i] = true;
  }
}

void check_jobs(const std::vector<TransferJob>& jobs) {
  for (const auto& j : jobs) {
    if (!(j.transfer_cost >= 0) || !(j.decompress_cost >= 0)) {
      throw Error(ErrorCode::InvalidArgument, "job '" + j.id + "' has a negative or NaN cost");
    }
  }
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

std::vector<std::size_t> johnson_order(const std::vector<TransferJob>& jobs) {
  check_jobs(jobs);
  std::vector<std::size_t> first, second;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    (jobs[i].transfer_cost <= jobs[i].decompress_cost ? first : second).push_back(i);
  }
  std::stable_sort(first.begin(), first.end(), [&](auto a, auto b) {
    if (jobs[a].transfer_cost != jobs[b].transfer_cost) return jobs[a].transfer_cost < jobs[b].transfer_cost;
    return jobs[a].id < jobs[b].id;
  });
  std::stable_sort(second.begin(), second.end(), [&](auto a, auto b) {
    if (jobs[a].decompress_cost != jobs[b].decompress_cost) return jobs[a].decompress_cost > jobs[b].decompress_cost;
    return jobs[a].id < jobs[b].id;
  });
  first.insert(first.end(), second.begin(), second.end());
  return first;
}

ScheduleResult simulate_pipeline(const std::vector<TransferJob>& jobs, const std::vector<std::size_t>& order) {
  check_jobs(jobs);
  check_permutation(jobs.size(), order);
  ScheduleResult r;
  r.order = order;
  double link_free = 0, decoder_free = 0;
  for (auto i : order) {
    JobTimeline t;
    t.id = jobs[i].id;
    t.transfer_start = link_free;
    t.transfer_end = link_free + jobs[i].transfer_cost;
    t.decompress_start = std::max(t.transfer_end, decoder_free);
    t.decompress_end = t.decompress_start + jobs[i].decompress_cost;
    link_free = t.transfer_end;
    decoder_free = t.decompress_end;
    r.timeline.push_back(std::move(t));
  }
  r.makespan = decoder_free;
  return r;
}

ScheduleResult brute_force_schedule(const std::vector<TransferJob>& jobs) {
  if (jobs.size() > 10) throw Error(ErrorCode::InvalidArgument, "brute force is limited to 10 jobs");
  std::vector<std::size_t> order(jobs.size());
  std::iota(order.begin(), order.end(), 0);
  ScheduleResult best = simulate_pipeline(jobs, order);
  while (std::next_permutation(order.begin(), order.end())) {
    auto r = simulate_pipeline(jobs, order);
    if (r.makespan < best.makespan) best = std::move(r);
  }
  return best;
}

TransferJob estimate_job(std::string id, const CompressedArtifact& artifact, double link_bandwidth,
                         double decode_rate) {
  if (!(link_bandwidth > 0) || !(decode_rate > 0)) {
    throw Error(ErrorCode::InvalidArgument, "bandwidth and decode rate must be positive");
  }
  TransferJob j;
  j.id = std::move(id);
  j.transfer_cost = static_cast<double>(compressed_size(artifact)) / link_bandwidth;
  const auto plain = artifact.original_type.is_fixed()
                         ? artifact.original_count * artifact.original_type.fixed_width()
                         : artifact.original_count * 8;  // offsets only; payload size is unknown until decode
  j.decompress_cost = static_cast<double>(plain) / decode_rate;
  return j;
}

double measure_decode_rate(const CompressedArtifact& artifact, const VirtualDevice& dev, int reps) {
  if (reps < 1) throw Error(ErrorCode::InvalidArgument, "reps must be >= 1");
  std::vector<double> times;
  std::size_t plain = 0;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = Clock::now();
    const auto col = decode_artifact(artifact, dev);
    times.push_back(seconds_since(t0));
    plain = col.plain_size();
  }
  std::sort(times.begin(), times.end());
  const double t = std::max(times[times.size() / 2], 1e-9);
  return static_cast<double>(std::max<std::size_t>(plain, 1)) / t;
}

OverlapResult run_overlapped(const std::vector<OverlapJob>& jobs, const std::vector<std::size_t>& order,
                             double link_bandwidth, const VirtualDevice& dev) {
  check_permutation(jobs.size(), order);
  if (!(link_bandwidth > 0)) throw Error(ErrorCode::InvalidArgument, "link bandwidth must be positive");

  struct Staged {
    std::size_t job;
    Bytes bytes;
    double start, end;
  };
  std::mutex mu;
  std::condition_variable cv;
  std::deque<Staged> queue;
  std::atomic<bool> abort{false};
  const auto t0 = Clock::now();

  std::thread link([&] {
    for (auto i : order) {
      if (abort.load()) break;
      const double start = seconds_since(t0);
      Bytes staged(jobs[i].container.begin(), jobs[i].container.end());
      const auto due = t0 + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(
                                start + static_cast<double>(staged.size()) / link_bandwidth));
      std::this_thread::sleep_until(due);
      const double end = seconds_since(t0);
      {
        std::lock_guard lock(mu);
        queue.push_back({i, std::move(staged), start, end});
      }
      cv.notify_one();
    }
  });

  OverlapResult result;
  result.columns.resize(jobs.size());
  std::exception_ptr failure;
  for (std::size_t done = 0; done < order.size() && !failure; ++done) {
    Staged s;
    {
      std::unique_lock lock(mu);
      cv.wait(lock, [&] { return !queue.empty(); });
      s = std::move(queue.front());
      queue.pop_front();
    }
    JobTimeline t;
    t.id = jobs[s.job].id;
    t.transfer_start = s.start;
    t.transfer_end = s.end;
    t.decompress_start = seconds_since(t0);
    try {
      result.columns[s.job] = decode_artifact(deserialize_artifact(s.bytes), dev);
    } catch (const Error& e) {
      failure = std::make_exception_ptr(e.with_context(jobs[s.job].id));
    } catch (...) {
      failure = std::current_exception();
    }
    t.decompress_end = seconds_since(t0);
    result.timeline.push_back(std::move(t));
  }
  abort = true;
  link.join();
  if (failure) std::rethrow_exception(failure);
  result.makespan = seconds_since(t0);
  return result;
}

}  // namespace patternpress
