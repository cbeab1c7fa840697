#include "nrpt/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nrpt/errors.hpp"

namespace nrpt {

AnnealingSchedule::AnnealingSchedule(std::vector<double> betas) : betas_(std::move(betas)) {
  if (betas_.size() < 2) {
    throw ConfigError("annealing schedule needs at least two points, got " +
                      std::to_string(betas_.size()));
  }
  if (betas_.front() != 0.0 || betas_.back() != 1.0) {
    throw ConfigError("annealing schedule must start at 0 and end at 1");
  }
  for (std::size_t i = 1; i < betas_.size(); ++i) {
    if (!std::isfinite(betas_[i]) || !(betas_[i] > betas_[i - 1])) {
      throw ConfigError("annealing schedule is not strictly increasing at index " +
                        std::to_string(i));
    }
  }
}

AnnealingSchedule AnnealingSchedule::uniform(std::size_t num_intervals) {
  if (num_intervals == 0) {
    throw ConfigError("uniform schedule needs at least one interval");
  }
  std::vector<double> betas(num_intervals + 1);
  for (std::size_t i = 0; i <= num_intervals; ++i) {
    betas[i] = static_cast<double>(i) / static_cast<double>(num_intervals);
  }
  betas.back() = 1.0;
  return AnnealingSchedule(std::move(betas));
}

double AnnealingSchedule::mesh() const {
  double widest = 0.0;
  for (std::size_t i = 1; i < betas_.size(); ++i) {
    widest = std::max(widest, betas_[i] - betas_[i - 1]);
  }
  return widest;
}

}  // namespace nrpt
