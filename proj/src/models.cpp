#include "nrpt/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "nrpt/errors.hpp"

namespace nrpt {

State TemperedModel::sample_reference(RandomStream&) const {
  throw ConfigError("model '" + name() + "' has no exact reference sampler");
}

State TemperedModel::sample_tempered(double, RandomStream&) const {
  throw ConfigError("model '" + name() + "' has no exact tempered sampler");
}

void TemperedModel::model_specific_step(State&, double, RandomStream&) const {
  throw ConfigError("model '" + name() + "' has no model-specific exploration kernel");
}

double TemperedModel::local_barrier(double) const {
  throw ConfigError("model '" + name() + "' has no closed-form barrier");
}

double TemperedModel::global_barrier(double) const {
  throw ConfigError("model '" + name() + "' has no closed-form barrier");
}

double TemperedModel::log_partition(double) const {
  throw ConfigError("model '" + name() + "' has no closed-form normalizing constant");
}

namespace {

void check_gaussian(int d, double sigma0, double sigma) {
  if (d < 1 || !(sigma > 0.0) || !(sigma0 > sigma) || !std::isfinite(sigma0)) {
    throw ConfigError("gaussian model needs d >= 1 and sigma0 > sigma > 0");
  }
}

double log_beta_half(int d) {
  const double h = 0.5 * d;
  return 2.0 * std::lgamma(h) - std::lgamma(2.0 * h);
}

double sigmoid(double z) {
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double squared_norm(const State& x) {
  double s = 0.0;
  for (double v : x) {
    s += v * v;
  }
  return s;
}

}  // namespace

double gaussian_sigma_beta(double beta, double sigma0, double sigma) {
  const double precision = (1.0 - beta) / (sigma0 * sigma0) + beta / (sigma * sigma);
  return 1.0 / std::sqrt(precision);
}

double gaussian_lambda(double beta, int d, double sigma0, double sigma) {
  check_gaussian(d, sigma0, sigma);
  const double sb = gaussian_sigma_beta(beta, sigma0, sigma);
  const double gap = 1.0 / (sigma * sigma) - 1.0 / (sigma0 * sigma0);
  return std::exp((1.0 - d) * std::numbers::ln2 - log_beta_half(d)) * gap * sb * sb;
}

double gaussian_Lambda(double beta, int d, double sigma0, double sigma) {
  check_gaussian(d, sigma0, sigma);
  const double sb = gaussian_sigma_beta(beta, sigma0, sigma);
  return std::exp((2.0 - d) * std::numbers::ln2 - log_beta_half(d)) * std::log(sigma0 / sb);
}

double gaussian_optimal_beta(int k, int n, double sigma0, double sigma) {
  if (n < 1 || k < 0 || k > n) {
    throw ConfigError("gaussian_optimal_beta needs 0 <= k <= N and N >= 1");
  }
  if (k == 0) {
    return 0.0;
  }
  if (k == n) {
    return 1.0;
  }
  const double t = static_cast<double>(k) / n;
  const double target = std::pow(sigma, t) * std::pow(sigma0, 1.0 - t);
  const double p0 = 1.0 / (sigma0 * sigma0);
  return (1.0 / (target * target) - p0) / (1.0 / (sigma * sigma) - p0);
}

double discrete_lambda(double beta, int k, double a) {
  const double ab = std::pow(a, beta);
  const double denom = k + (k + 1) * ab;
  return k * (k + 1.0) * ab * std::log(a) / (denom * denom);
}

double discrete_Lambda(int k, double a) {
  return k * (k + 1.0) * (a - 1.0) / ((2.0 * k + 1.0) * (k + (k + 1.0) * a));
}

// ---------------------------------------------------------------- Gaussian

GaussianModel::GaussianModel(int d, double sigma0, double sigma)
    : d_(d), sigma0_(sigma0), sigma_(sigma) {
  check_gaussian(d, sigma0, sigma);
}

double GaussianModel::reference_potential(const State& x) const {
  return squared_norm(x) / (2.0 * sigma0_ * sigma0_);
}

double GaussianModel::potential(const State& x) const {
  return 0.5 * squared_norm(x) * (1.0 / (sigma_ * sigma_) - 1.0 / (sigma0_ * sigma0_));
}

State GaussianModel::sample_reference(RandomStream& rng) const { return sample_tempered(0.0, rng); }

State GaussianModel::sample_tempered(double beta, RandomStream& rng) const {
  const double sb = gaussian_sigma_beta(beta, sigma0_, sigma_);
  State x(static_cast<std::size_t>(d_));
  for (double& v : x) {
    v = sb * rng.normal();
  }
  return x;
}

ExplorationSpec GaussianModel::default_exploration() const {
  ExplorationSpec spec;
  spec.kind = ExplorationKind::kSlice;
  return spec;
}

double GaussianModel::local_barrier(double beta) const {
  return gaussian_lambda(beta, d_, sigma0_, sigma_);
}

double GaussianModel::global_barrier(double beta) const {
  return gaussian_Lambda(beta, d_, sigma0_, sigma_);
}

double GaussianModel::log_partition(double beta) const {
  return d_ * std::log(gaussian_sigma_beta(beta, sigma0_, sigma_) / sigma0_);
}

// ---------------------------------------------------------------- discrete

DiscreteMultimodal::DiscreteMultimodal(int k, double a) : k_(k), a_(a) {
  if (k < 1 || !(a > 1.0) || !std::isfinite(a)) {
    throw ConfigError("discrete model needs k >= 1 and a > 1");
  }
}

double DiscreteMultimodal::reference_potential(const State&) const { return 0.0; }

double DiscreteMultimodal::potential(const State& x) const {
  const auto point = static_cast<long>(x.at(0));
  return point % 2 == 0 ? -std::log(a_) : 0.0;
}

State DiscreteMultimodal::sample_reference(RandomStream& rng) const {
  return {static_cast<double>(rng.index(num_states()))};
}

std::vector<double> DiscreteMultimodal::tempered_probabilities(double beta) const {
  const double even = std::pow(a_, beta);
  const double z = (k_ + 1) * even + k_;
  std::vector<double> p(num_states());
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = (i % 2 == 0 ? even : 1.0) / z;
  }
  return p;
}

State DiscreteMultimodal::sample_tempered(double beta, RandomStream& rng) const {
  const std::vector<double> p = tempered_probabilities(beta);
  double u = rng.uniform();
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    if (u < p[i]) {
      return {static_cast<double>(i)};
    }
    u -= p[i];
  }
  return {static_cast<double>(p.size() - 1)};
}

void DiscreteMultimodal::model_specific_step(State& x, double beta, RandomStream& rng) const {
  x = sample_tempered(beta, rng);
}

ExplorationSpec DiscreteMultimodal::default_exploration() const {
  ExplorationSpec spec;
  spec.kind = ExplorationKind::kModelSpecific;
  return spec;
}

double DiscreteMultimodal::local_barrier(double beta) const { return discrete_lambda(beta, k_, a_); }

double DiscreteMultimodal::global_barrier(double beta) const {
  // Lambda(beta) = integral of lambda, which has the antiderivative
  //   -k / (k + (k+1) a^beta) up to a constant.
  const double at = k_ / (k_ + (k_ + 1) * std::pow(a_, beta));
  const double at0 = k_ / (2.0 * k_ + 1.0);
  return at0 - at;
}

double DiscreteMultimodal::log_partition(double beta) const {
  return std::log(((k_ + 1) * std::pow(a_, beta) + k_) / (2.0 * k_ + 1.0));
}

State DiscreteMultimodal::state_of(std::size_t index) const {
  if (index >= num_states()) {
    throw ConfigError("discrete state index out of range");
  }
  return {static_cast<double>(index)};
}

std::size_t DiscreteMultimodal::index_of(const State& x) const {
  return static_cast<std::size_t>(x.at(0));
}

// ---------------------------------------------------------------- Ising

double ising_conditional_flip_prob(const State& spins, std::size_t site, double beta, int m,
                                   double mu) {
  return IsingModel(m, mu).conditional_up_probability(spins, site, beta);
}

IsingModel::IsingModel(int m, double mu) : m_(m), mu_(mu) {
  if (m < 1 || !std::isfinite(mu)) {
    throw ConfigError("ising model needs M >= 1 and finite mu");
  }
}

double IsingModel::neighbor_sum(const State& x, std::size_t site) const {
  const auto m = static_cast<std::size_t>(m_);
  const std::size_t r = site / m;
  const std::size_t c = site % m;
  double s = 0.0;
  if (r > 0) s += x[site - m];
  if (r + 1 < m) s += x[site + m];
  if (c > 0) s += x[site - 1];
  if (c + 1 < m) s += x[site + 1];
  return s;
}

double IsingModel::reference_potential(const State& x) const {
  double total = 0.0;
  for (double s : x) {
    total += s;
  }
  return -mu_ * total;
}

double IsingModel::potential(const State& x) const {
  const auto m = static_cast<std::size_t>(m_);
  double bonds = 0.0;
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < m; ++c) {
      const std::size_t i = r * m + c;
      if (c + 1 < m) bonds += x[i] * x[i + 1];
      if (r + 1 < m) bonds += x[i] * x[i + m];
    }
  }
  return -bonds;
}

State IsingModel::sample_reference(RandomStream& rng) const {
  const double up = sigmoid(2.0 * mu_);
  State x(dimension());
  for (double& s : x) {
    s = rng.uniform() < up ? 1.0 : -1.0;
  }
  return x;
}

double IsingModel::conditional_up_probability(const State& x, std::size_t site, double beta) const {
  if (site >= dimension() || x.size() != dimension()) {
    throw ConfigError("ising site " + std::to_string(site) + " outside a " + std::to_string(m_) +
                      "x" + std::to_string(m_) + " grid");
  }
  return sigmoid(2.0 * (beta * neighbor_sum(x, site) + mu_));
}

void IsingModel::model_specific_step(State& x, double beta, RandomStream& rng) const {
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double up = sigmoid(2.0 * (beta * neighbor_sum(x, i) + mu_));
    x[i] = rng.uniform() < up ? 1.0 : -1.0;
  }
}

ExplorationSpec IsingModel::default_exploration() const {
  ExplorationSpec spec;
  spec.kind = ExplorationKind::kModelSpecific;
  return spec;
}

std::size_t IsingModel::num_states() const {
  if (dimension() > 20) {
    throw ConfigError("ising grid too large to enumerate");
  }
  return std::size_t{1} << dimension();
}

State IsingModel::state_of(std::size_t index) const {
  State x(dimension());
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = (index >> i) & 1U ? 1.0 : -1.0;
  }
  return x;
}

std::size_t IsingModel::index_of(const State& x) const {
  std::size_t index = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0) index |= std::size_t{1} << i;
  }
  return index;
}

// ---------------------------------------------------------------- mixture

GaussianMixturePosterior::GaussianMixturePosterior(int num_obs, double separation,
                                                   double prior_sd, std::uint64_t data_seed)
    : prior_sd_(prior_sd) {
  if (num_obs < 1 || !(prior_sd > 0.0)) {
    throw ConfigError("mixture model needs at least one observation and prior_sd > 0");
  }
  RandomStream rng(StreamKey(data_seed).value());
  data_.reserve(static_cast<std::size_t>(num_obs));
  for (int n = 0; n < num_obs; ++n) {
    const double centre = (n % 2 == 0 ? -0.5 : 0.5) * separation;
    data_.push_back(centre + rng.normal());
  }
}

double GaussianMixturePosterior::reference_potential(const State& x) const {
  return squared_norm(x) / (2.0 * prior_sd_ * prior_sd_);
}

double GaussianMixturePosterior::potential(const State& x) const {
  const double log_norm = -0.5 * std::log(2.0 * std::numbers::pi) - std::numbers::ln2;
  double total = 0.0;
  for (double y : data_) {
    const double a = -0.5 * (y - x[0]) * (y - x[0]);
    const double b = -0.5 * (y - x[1]) * (y - x[1]);
    const double hi = std::max(a, b);
    total += log_norm + hi + std::log1p(std::exp(std::min(a, b) - hi));
  }
  return -total;
}

State GaussianMixturePosterior::sample_reference(RandomStream& rng) const {
  return {prior_sd_ * rng.normal(), prior_sd_ * rng.normal()};
}

ExplorationSpec GaussianMixturePosterior::default_exploration() const {
  ExplorationSpec spec;
  spec.kind = ExplorationKind::kSlice;
  spec.n_expl = 2;
  return spec;
}

// ---------------------------------------------------------------- flat

ReferenceOnlyModel::ReferenceOnlyModel(int d) : d_(d) {
  if (d < 1) {
    throw ConfigError("flat model needs d >= 1");
  }
}

double ReferenceOnlyModel::reference_potential(const State& x) const {
  return 0.5 * squared_norm(x);
}

State ReferenceOnlyModel::sample_reference(RandomStream& rng) const {
  State x(static_cast<std::size_t>(d_));
  for (double& v : x) {
    v = rng.normal();
  }
  return x;
}

State ReferenceOnlyModel::sample_tempered(double, RandomStream& rng) const {
  return sample_reference(rng);
}

ExplorationSpec ReferenceOnlyModel::default_exploration() const {
  ExplorationSpec spec;
  spec.kind = ExplorationKind::kExactReference;
  return spec;
}

}  // namespace nrpt
