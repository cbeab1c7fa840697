#pragma once

#include <cstddef>
#include <vector>

#include "nrpt/schedule.hpp"
#include "nrpt/stats.hpp"

namespace nrpt {

/// Lambda_hat(beta_k) = sum_{i <= k} rhat^{(i-1,i)}, starting from 0.
std::vector<double> cumulative_barrier_knots(const std::vector<double>& rhat,
                                             const AnnealingSchedule& schedule);
std::vector<double> cumulative_barrier_knots(const RejectionStats& stats,
                                             const AnnealingSchedule& schedule);

/// Monotone C1 cubic Hermite interpolant of a cumulative barrier
/// (Fritsch-Carlson slope limiting). Its derivative is the local barrier
/// estimate lambda_hat, a piecewise quadratic that is never negative.
class BarrierEstimate {
 public:
  BarrierEstimate() = default;

  /// Throws ConfigError for fewer than two knots or non-increasing abscissae.
  /// Decreasing ordinates are clamped to the previous value with a warning.
  static BarrierEstimate fit(std::vector<double> betas, std::vector<double> values);

  double operator()(double beta) const;
  double derivative(double beta) const;
  double total() const { return values_.back(); }

  const std::vector<double>& knot_betas() const { return betas_; }
  const std::vector<double>& knot_values() const { return values_; }
  const std::vector<double>& knot_slopes() const { return slopes_; }

 private:
  std::size_t interval(double beta) const;

  std::vector<double> betas_;
  std::vector<double> values_;
  std::vector<double> slopes_;
};

inline BarrierEstimate fit_monotone_barrier(std::vector<double> betas, std::vector<double> values) {
  return BarrierEstimate::fit(std::move(betas), std::move(values));
}

/// lambda_hat(beta); throws ConfigError outside [0, 1].
double local_barrier_eval(const BarrierEstimate& estimate, double beta);

/// beta*_k solving Lambda_hat(beta*_k) = (k/N) Lambda_hat(1) by bisection.
/// A flat estimate yields the uniform schedule.
AnnealingSchedule update_schedule(const BarrierEstimate& estimate, std::size_t n);

struct ParallelismPlan {
  std::size_t n_star = 1;
  std::size_t k_star = 1;
  double tau_bound = 0.5;
  double lambda_hat = 0.0;
  std::size_t total_cores = 2;

  /// Round trips per scan summed over the total_cores / (N+1) copies when
  /// each copy uses N+1 chains.
  double tau_of_n(std::size_t n) const;
};

/// N* = round(2 Lambda_hat) in [1, cores - 1], k* = floor(cores / (N* + 1)) >= 1.
ParallelismPlan plan_parallelism(double lambda_hat, std::size_t total_cores);

}  // namespace nrpt
