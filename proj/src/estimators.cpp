#include "nrpt/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nrpt/errors.hpp"

namespace nrpt {

double log_partition_ratio(const std::vector<double>& mean_energy,
                           const AnnealingSchedule& schedule) {
  if (mean_energy.size() != schedule.num_chains()) {
    throw ConfigError("energy means cover " + std::to_string(mean_energy.size()) +
                      " chains, schedule has " + std::to_string(schedule.num_chains()));
  }
  double integral = 0.0;
  for (std::size_t k = 1; k < mean_energy.size(); ++k) {
    integral += 0.5 * (schedule[k] - schedule[k - 1]) * (mean_energy[k] + mean_energy[k - 1]);
  }
  return -integral;
}

double log_partition_ratio(const EnergySummaries& summaries, const AnnealingSchedule& schedule) {
  if (summaries.count == 0) {
    throw ConfigError("no energy samples recorded");
  }
  return log_partition_ratio(summaries.mean, schedule);
}

double observed_round_trip_rate(const RoundTripLedger& ledger, std::uint64_t n_scans) {
  if (n_scans == 0) {
    throw ConfigError("round trip rate needs at least one scan");
  }
  return static_cast<double>(ledger.total_trips()) / static_cast<double>(n_scans);
}

EssResult ess_batch_means(std::span<const double> series) {
  const std::size_t n = series.size();
  if (n < 100) {
    throw ConfigError("batch-means ESS needs at least 100 values, got " + std::to_string(n));
  }
  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double v : series) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n - 1);
  if (!(var > 0.0)) {
    return {static_cast<double>(n), true};
  }

  const auto batches = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
  const std::size_t batch_size = n / batches;
  const std::size_t used = batches * batch_size;
  double used_mean = 0.0;
  for (std::size_t i = 0; i < used; ++i) used_mean += series[i];
  used_mean /= static_cast<double>(used);
  double batch_var = 0.0;
  for (std::size_t b = 0; b < batches; ++b) {
    double m = 0.0;
    for (std::size_t i = b * batch_size; i < (b + 1) * batch_size; ++i) m += series[i];
    m /= static_cast<double>(batch_size);
    batch_var += (m - used_mean) * (m - used_mean);
  }
  batch_var /= static_cast<double>(batches - 1);
  // Asymptotic variance estimate sigma^2 = batch_size * Var(batch means).
  const double sigma2 = static_cast<double>(batch_size) * batch_var;
  const double ess = sigma2 > 0.0 ? static_cast<double>(n) * var / sigma2 : static_cast<double>(n);
  return {std::clamp(ess, 1.0, static_cast<double>(n)), false};
}

}  // namespace nrpt
