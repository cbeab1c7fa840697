#include "nrpt/barrier.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <string>

#include "nrpt/errors.hpp"

namespace nrpt {

std::vector<double> cumulative_barrier_knots(const std::vector<double>& rhat,
                                             const AnnealingSchedule& schedule) {
  if (rhat.size() != schedule.num_pairs()) {
    throw ConfigError("got " + std::to_string(rhat.size()) + " rejection rates for " +
                      std::to_string(schedule.num_pairs()) + " chain pairs");
  }
  std::vector<double> knots(rhat.size() + 1, 0.0);
  for (std::size_t i = 0; i < rhat.size(); ++i) {
    knots[i + 1] = knots[i] + rhat[i];
  }
  return knots;
}

std::vector<double> cumulative_barrier_knots(const RejectionStats& stats,
                                             const AnnealingSchedule& schedule) {
  return cumulative_barrier_knots(stats.rhat(), schedule);
}

namespace {

int sign(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

BarrierEstimate BarrierEstimate::fit(std::vector<double> betas, std::vector<double> values) {
  const std::size_t n = betas.size();
  if (n < 2 || values.size() != n) {
    throw ConfigError("barrier interpolation needs at least two knots with matching values");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(betas[i] > betas[i - 1])) {
      throw ConfigError("barrier knots must have strictly increasing betas");
    }
    if (values[i] < values[i - 1]) {
      std::clog << "warning: clamping decreasing barrier knot " << i << " (" << values[i]
                << " < " << values[i - 1] << ")\n";
      values[i] = values[i - 1];
    }
  }

  std::vector<double> h(n - 1);
  std::vector<double> delta(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    h[k] = betas[k + 1] - betas[k];
    delta[k] = (values[k + 1] - values[k]) / h[k];
  }

  std::vector<double> m(n, 0.0);
  if (n == 2) {
    m[0] = m[1] = delta[0];
  } else {
    for (std::size_t k = 1; k + 1 < n; ++k) {
      m[k] = sign(delta[k - 1]) * sign(delta[k]) <= 0 ? 0.0 : 0.5 * (delta[k - 1] + delta[k]);
    }
    // Shape-preserving one-sided three-point endpoint slopes.
    auto endpoint = [](double h0, double h1, double d0, double d1) {
      double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
      if (sign(s) != sign(d0)) {
        s = 0.0;
      } else if (sign(d0) != sign(d1) && std::abs(s) > 3.0 * std::abs(d0)) {
        s = 3.0 * d0;
      }
      return s;
    };
    m[0] = endpoint(h[0], h[1], delta[0], delta[1]);
    m[n - 1] = endpoint(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  }

  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (delta[k] == 0.0) {
      m[k] = 0.0;
      m[k + 1] = 0.0;
      continue;
    }
    const double a = m[k] / delta[k];
    const double b = m[k + 1] / delta[k];
    const double r2 = a * a + b * b;
    if (r2 > 9.0) {
      const double t = 3.0 / std::sqrt(r2);
      m[k] = t * a * delta[k];
      m[k + 1] = t * b * delta[k];
    }
  }

  BarrierEstimate est;
  est.betas_ = std::move(betas);
  est.values_ = std::move(values);
  est.slopes_ = std::move(m);
  return est;
}

std::size_t BarrierEstimate::interval(double beta) const {
  const auto it = std::upper_bound(betas_.begin(), betas_.end(), beta);
  const auto k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - betas_.begin() - 1, 0));
  return std::min(k, betas_.size() - 2);
}

double BarrierEstimate::operator()(double beta) const {
  beta = std::clamp(beta, betas_.front(), betas_.back());
  const std::size_t k = interval(beta);
  const double h = betas_[k + 1] - betas_[k];
  const double t = (beta - betas_[k]) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double value = (2.0 * t3 - 3.0 * t2 + 1.0) * values_[k] +
                       (t3 - 2.0 * t2 + t) * h * slopes_[k] +
                       (-2.0 * t3 + 3.0 * t2) * values_[k + 1] + (t3 - t2) * h * slopes_[k + 1];
  return std::clamp(value, values_[k], values_[k + 1]);
}

double BarrierEstimate::derivative(double beta) const {
  beta = std::clamp(beta, betas_.front(), betas_.back());
  const std::size_t k = interval(beta);
  const double h = betas_[k + 1] - betas_[k];
  const double t = (beta - betas_[k]) / h;
  const double t2 = t * t;
  const double slope = (6.0 * t2 - 6.0 * t) * (values_[k] - values_[k + 1]) / h +
                       (3.0 * t2 - 4.0 * t + 1.0) * slopes_[k] + (3.0 * t2 - 2.0 * t) * slopes_[k + 1];
  return std::max(slope, 0.0);
}

double local_barrier_eval(const BarrierEstimate& estimate, double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw ConfigError("local barrier requested outside [0, 1]");
  }
  return estimate.derivative(beta);
}

AnnealingSchedule update_schedule(const BarrierEstimate& estimate, std::size_t n) {
  if (n < 1) {
    throw ConfigError("schedule needs at least one interval");
  }
  const double total = estimate.total();
  if (!(total > 0.0)) {
    return AnnealingSchedule::uniform(n);
  }
  const double tol = 1e-10 * total;
  std::vector<double> betas(n + 1);
  betas[0] = 0.0;
  betas[n] = 1.0;
  for (std::size_t k = 1; k < n; ++k) {
    const double target = total * static_cast<double>(k) / static_cast<double>(n);
    double lo = betas[k - 1];
    double hi = 1.0;
    double mid = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200; ++iter) {
      mid = 0.5 * (lo + hi);
      const double value = estimate(mid);
      if (std::abs(value - target) <= tol) {
        break;
      }
      if (value < target) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    betas[k] = mid;
  }
  return AnnealingSchedule(std::move(betas));
}

double ParallelismPlan::tau_of_n(std::size_t n) const {
  const double nn = static_cast<double>(n);
  const double ratio = 1.0 - lambda_hat / nn;
  return static_cast<double>(total_cores) * ratio / (2.0 * (nn + 1.0) * (ratio + lambda_hat));
}

ParallelismPlan plan_parallelism(double lambda_hat, std::size_t total_cores) {
  if (!(lambda_hat >= 0.0) || !std::isfinite(lambda_hat)) {
    throw ConfigError("barrier estimate must be finite and nonnegative");
  }
  if (total_cores < 2) {
    throw ConfigError("planning needs at least two cores");
  }
  ParallelismPlan plan;
  plan.lambda_hat = lambda_hat;
  plan.total_cores = total_cores;
  const auto rounded = static_cast<std::size_t>(std::floor(2.0 * lambda_hat + 0.5));
  plan.n_star = std::clamp<std::size_t>(rounded, 1, total_cores - 1);
  plan.k_star = std::max<std::size_t>(1, total_cores / (plan.n_star + 1));
  plan.tau_bound = 1.0 / (2.0 + 2.0 * lambda_hat);
  return plan;
}

}  // namespace nrpt
