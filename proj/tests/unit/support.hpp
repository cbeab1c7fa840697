#pragma once

// Hand-rolled generators and small test models shared by the unit tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "nrpt/model.hpp"
#include "nrpt/random.hpp"
#include "nrpt/schedule.hpp"

namespace nrpt::testing {

inline double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double variance_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return ss / static_cast<double>(v.size() - 1);
}

/// Random strictly increasing schedule with n+1 knots and pinned endpoints.
inline AnnealingSchedule random_schedule(std::size_t n, RandomStream& rng) {
  std::vector<double> inner;
  while (inner.size() + 1 < n) {
    const double b = rng.uniform();
    if (b > 0.0 && std::find(inner.begin(), inner.end(), b) == inner.end()) inner.push_back(b);
  }
  std::sort(inner.begin(), inner.end());
  std::vector<double> betas{0.0};
  betas.insert(betas.end(), inner.begin(), inner.end());
  betas.push_back(1.0);
  return AnnealingSchedule(betas);
}

/// n swap probabilities drawn uniformly from [lo, 1].
inline std::vector<double> random_swap_probs(std::size_t n, double lo, RandomStream& rng) {
  std::vector<double> s(n);
  for (double& x : s) x = lo + (1.0 - lo) * rng.uniform();
  return s;
}

/// Nondecreasing ordinates with occasional flat steps.
inline std::vector<double> random_cumulative(std::size_t n, RandomStream& rng) {
  std::vector<double> v{0.0};
  for (std::size_t i = 1; i < n; ++i) {
    const double step = rng.uniform() < 0.25 ? 0.0 : rng.exponential(1.0);
    v.push_back(v.back() + step);
  }
  return v;
}

/// V = 0, V0 = 0, and an exploration step that leaves the state untouched, so
/// only communication moves states around.
class FrozenModel final : public TemperedModel {
 public:
  std::string name() const override { return "frozen"; }
  std::size_t dimension() const override { return 1; }
  bool is_continuous() const override { return true; }
  double reference_potential(const State&) const override { return 0.0; }
  double potential(const State&) const override { return 0.0; }
  bool has_model_specific_step() const override { return true; }
  void model_specific_step(State&, double, RandomStream&) const override {}
  ExplorationSpec default_exploration() const override { return {}; }
};

/// pi0 = N(0, 1) and V(x) = (x^2 - 1)^2 - x^2 / 2, so pi^(1) is proportional
/// to exp(-(x^2 - 1)^2): symmetric and bimodal.
class DoubleWell final : public TemperedModel {
 public:
  std::string name() const override { return "double_well"; }
  std::size_t dimension() const override { return 1; }
  bool is_continuous() const override { return true; }
  double reference_potential(const State& x) const override { return 0.5 * x[0] * x[0]; }
  double potential(const State& x) const override {
    const double q = x[0] * x[0] - 1.0;
    return q * q - 0.5 * x[0] * x[0];
  }
  bool has_exact_reference() const override { return true; }
  State sample_reference(RandomStream& rng) const override { return {rng.normal()}; }
  ExplorationSpec default_exploration() const override {
    ExplorationSpec spec;
    spec.kind = ExplorationKind::kSlice;
    return spec;
  }
};

}  // namespace nrpt::testing
