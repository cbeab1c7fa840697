#include "nrpt/stats.hpp"

#include <string>

#include "nrpt/errors.hpp"

namespace nrpt {

std::vector<double> RejectionStats::rhat() const {
  std::vector<double> r(rejection_sum.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (count[i] == 0) {
      throw ConfigError("rejection rate of pair " + std::to_string(i) +
                        " is undefined without any recorded scan");
    }
    r[i] = rejection_sum[i] / static_cast<double>(count[i]);
  }
  return r;
}

void EnergySummaries::add(const std::vector<double>& energies) {
  if (energies.size() != mean.size()) {
    throw ConfigError("energy summary expects one value per chain");
  }
  ++count;
  const double n = static_cast<double>(count);
  for (std::size_t i = 0; i < mean.size(); ++i) {
    const double delta = energies[i] - mean[i];
    mean[i] += delta / n;
    m2[i] += delta * (energies[i] - mean[i]);
  }
}

double EnergySummaries::variance(std::size_t chain) const {
  return count > 1 ? m2[chain] / static_cast<double>(count - 1) : 0.0;
}

}  // namespace nrpt
