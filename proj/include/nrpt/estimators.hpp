#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nrpt/schedule.hpp"
#include "nrpt/stats.hpp"
#include "nrpt/tempering.hpp"

namespace nrpt {

/// log Z(1)/Z(0) = -integral_0^1 E[V^(beta)] dbeta, integrated with the
/// trapezoidal rule over the schedule knots.
double log_partition_ratio(const std::vector<double>& mean_energy,
                           const AnnealingSchedule& schedule);
double log_partition_ratio(const EnergySummaries& summaries, const AnnealingSchedule& schedule);

/// Round trips over all machines per scan.
double observed_round_trip_rate(const RoundTripLedger& ledger, std::uint64_t n_scans);

struct EssResult {
  double ess = 0.0;
  bool degenerate = false;  // zero sample variance; ess reported as n
};

/// Batch-means effective sample size with floor(sqrt(n)) batches, clamped to
/// [1, n]. Throws ConfigError for fewer than 100 values.
EssResult ess_batch_means(std::span<const double> series);

}  // namespace nrpt
