#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace nrpt {

/// Per adjacent pair: running sum of (1 - alpha) and the number of scans that
/// contributed to it. Every pair contributes every scan unless the run is
/// restricted to proposed pairs.
struct RejectionStats {
  std::vector<double> rejection_sum;
  std::vector<std::uint64_t> count;

  explicit RejectionStats(std::size_t num_pairs = 0)
      : rejection_sum(num_pairs, 0.0), count(num_pairs, 0) {}

  std::size_t num_pairs() const { return rejection_sum.size(); }
  void add(std::size_t pair, double alpha) {
    rejection_sum[pair] += 1.0 - alpha;
    ++count[pair];
  }
  /// Mean of (1 - alpha) per pair. Throws ConfigError when a pair has no data.
  std::vector<double> rhat() const;
};

/// Welford running mean and variance of V for each chain.
struct EnergySummaries {
  std::vector<double> mean;
  std::vector<double> m2;
  std::uint64_t count = 0;

  explicit EnergySummaries(std::size_t num_chains = 0)
      : mean(num_chains, 0.0), m2(num_chains, 0.0) {}

  std::size_t num_chains() const { return mean.size(); }
  void add(const std::vector<double>& energies);
  double variance(std::size_t chain) const;
};

}  // namespace nrpt
