#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace nrpt {

/// Strictly increasing grid 0 = beta_0 < beta_1 < ... < beta_N = 1.
///
/// Chain i runs at beta_i; adjacent pair i couples chains i and i+1.
class AnnealingSchedule {
 public:
  /// Throws ConfigError unless the grid starts at 0, ends at 1, is strictly
  /// increasing and has at least two points.
  explicit AnnealingSchedule(std::vector<double> betas);

  /// Equally spaced grid with `num_intervals` intervals.
  static AnnealingSchedule uniform(std::size_t num_intervals);

  std::size_t num_chains() const { return betas_.size(); }
  std::size_t num_pairs() const { return betas_.size() - 1; }
  /// N, the index of the target chain.
  std::size_t last() const { return betas_.size() - 1; }

  double operator[](std::size_t i) const { return betas_[i]; }
  std::span<const double> betas() const { return betas_; }

  /// Largest gap between consecutive betas.
  double mesh() const;

  friend bool operator==(const AnnealingSchedule&, const AnnealingSchedule&) = default;

 private:
  std::vector<double> betas_;
};

}  // namespace nrpt
