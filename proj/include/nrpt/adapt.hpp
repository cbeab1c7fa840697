#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "nrpt/barrier.hpp"
#include "nrpt/model.hpp"
#include "nrpt/random.hpp"
#include "nrpt/schedule.hpp"
#include "nrpt/tempering.hpp"

namespace nrpt {

struct AdaptOptions {
  std::size_t total_cores = 8;   // tuning uses total_cores + 1 chains
  std::uint64_t n_tune = 1024;   // floor(log2 n_tune) doubling rounds
  std::uint64_t n_sample = 0;    // scans per copy after tuning; 0 skips sampling
  Scheme scheme = Scheme::kDeo;
  ExplorationSpec exploration;
  bool keep_samples = true;
  bool trace_index = false;
  int threads = 1;
};

struct RoundReport {
  int round = 0;
  std::uint64_t scans = 0;
  AnnealingSchedule schedule = AnnealingSchedule::uniform(1);  // schedule the round ran with
  std::vector<double> rhat;
  BarrierEstimate barrier;
  double log_z = 0.0;
  double observed_tau = 0.0;
};

struct AdaptResult {
  std::vector<RoundReport> rounds;
  AnnealingSchedule tuned_schedule = AnnealingSchedule::uniform(1);    // N = total_cores
  BarrierEstimate barrier;
  ParallelismPlan plan;
  AnnealingSchedule optimal_schedule = AnnealingSchedule::uniform(1);  // N = N*
  std::vector<RunResult> copies;
};

/// Doubling-round schedule adaptation followed by k* independent runs on the
/// N*-chain optimal schedule. Tuning-phase samples are discarded.
AdaptResult nrpt_adapt(const TemperedModel& model, const AdaptOptions& options,
                       const StreamKey& key);

}  // namespace nrpt
