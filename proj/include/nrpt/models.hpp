#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "nrpt/model.hpp"

namespace nrpt {

// Closed forms for the isotropic Gaussian pair
//   pi0 = N(0, sigma0^2 I_d),  pi = N(0, sigma^2 I_d),  sigma0 > sigma > 0,
// whose tempered distributions are N(0, sigma_beta^2 I_d) with
//   sigma_beta^-2 = (1 - beta) sigma0^-2 + beta sigma^-2.

double gaussian_sigma_beta(double beta, double sigma0, double sigma);
double gaussian_lambda(double beta, int d, double sigma0, double sigma);
double gaussian_Lambda(double beta, int d, double sigma0, double sigma);
/// beta_k of the equi-rejection schedule: sigma_{beta_k} = sigma^{k/N} sigma0^{1-k/N}.
double gaussian_optimal_beta(int k, int n, double sigma0, double sigma);

// Discrete model on {0,...,2k}: uniform reference, target weight a at even points.
double discrete_lambda(double beta, int k, double a);
double discrete_Lambda(int k, double a);

/// P(x_site = +1 | rest) under the Ising tempered density on an M x M grid with
/// free boundaries. Throws ConfigError for an invalid site.
double ising_conditional_flip_prob(const State& spins, std::size_t site, double beta, int m,
                                   double mu);

class GaussianModel final : public TemperedModel {
 public:
  GaussianModel(int d, double sigma0, double sigma);

  std::string name() const override { return "gaussian"; }
  std::size_t dimension() const override { return static_cast<std::size_t>(d_); }
  bool is_continuous() const override { return true; }

  double reference_potential(const State& x) const override;
  double potential(const State& x) const override;

  bool has_exact_reference() const override { return true; }
  State sample_reference(RandomStream& rng) const override;
  bool has_exact_tempered_sampler() const override { return true; }
  State sample_tempered(double beta, RandomStream& rng) const override;

  ExplorationSpec default_exploration() const override;

  bool has_analytic_barrier() const override { return true; }
  double local_barrier(double beta) const override;
  double global_barrier(double beta) const override;
  double log_partition(double beta) const override;

  int d() const { return d_; }
  double sigma0() const { return sigma0_; }
  double sigma() const { return sigma_; }

 private:
  int d_;
  double sigma0_;
  double sigma_;
};

/// States {0,...,2k}; V0 = 0, V(x) = -ln(a) for even x, 0 otherwise.
class DiscreteMultimodal final : public TemperedModel, public FiniteStateSpace {
 public:
  DiscreteMultimodal(int k, double a);

  std::string name() const override { return "discrete"; }
  std::size_t dimension() const override { return 1; }
  bool is_continuous() const override { return false; }

  double reference_potential(const State& x) const override;
  double potential(const State& x) const override;

  bool has_exact_reference() const override { return true; }
  State sample_reference(RandomStream& rng) const override;
  bool has_exact_tempered_sampler() const override { return true; }
  State sample_tempered(double beta, RandomStream& rng) const override;
  /// Gibbs update of the single coordinate, i.e. an exact tempered draw.
  bool has_model_specific_step() const override { return true; }
  void model_specific_step(State& x, double beta, RandomStream& rng) const override;

  ExplorationSpec default_exploration() const override;

  bool has_analytic_barrier() const override { return true; }
  double local_barrier(double beta) const override;
  double global_barrier(double beta) const override;
  double log_partition(double beta) const override;

  std::size_t num_states() const override { return static_cast<std::size_t>(2 * k_ + 1); }
  State state_of(std::size_t index) const override;
  std::size_t index_of(const State& x) const override;

  /// Normalized pi^(beta) over the 2k+1 points.
  std::vector<double> tempered_probabilities(double beta) const;

  int k() const { return k_; }
  double a() const { return a_; }

 private:
  int k_;
  double a_;
};

/// M x M Ising grid with free boundaries, spins stored as +-1.
///   pi^(beta)(x) proportional to exp(beta sum_{i~j} x_i x_j + mu sum_i x_i),
/// so V = -sum_{i~j} x_i x_j and V0 = -mu sum_i x_i.
class IsingModel final : public TemperedModel, public FiniteStateSpace {
 public:
  IsingModel(int m, double mu);

  std::string name() const override { return "ising"; }
  std::size_t dimension() const override { return static_cast<std::size_t>(m_ * m_); }
  bool is_continuous() const override { return false; }

  double reference_potential(const State& x) const override;
  double potential(const State& x) const override;

  /// Product of independent spins with P(+1) = sigmoid(2 mu).
  bool has_exact_reference() const override { return true; }
  State sample_reference(RandomStream& rng) const override;
  /// One systematic heat-bath sweep over all sites.
  bool has_model_specific_step() const override { return true; }
  void model_specific_step(State& x, double beta, RandomStream& rng) const override;

  ExplorationSpec default_exploration() const override;

  double conditional_up_probability(const State& x, std::size_t site, double beta) const;

  /// Enumeration is only allowed for at most 20 sites.
  std::size_t num_states() const override;
  State state_of(std::size_t index) const override;
  std::size_t index_of(const State& x) const override;

  int m() const { return m_; }
  double mu() const { return mu_; }

 private:
  double neighbor_sum(const State& x, std::size_t site) const;

  int m_;
  double mu_;
};

/// Two-component, equal-weight Gaussian mixture with unit noise and a
/// N(0, prior_sd^2) prior on each mean. The observations are synthetic and
/// fixed at construction; the posterior is symmetric under swapping labels.
class GaussianMixturePosterior final : public TemperedModel {
 public:
  GaussianMixturePosterior(int num_obs, double separation, double prior_sd,
                           std::uint64_t data_seed);

  std::string name() const override { return "mixture"; }
  std::size_t dimension() const override { return 2; }
  bool is_continuous() const override { return true; }

  double reference_potential(const State& x) const override;
  double potential(const State& x) const override;

  bool has_exact_reference() const override { return true; }
  State sample_reference(RandomStream& rng) const override;

  ExplorationSpec default_exploration() const override;

  const std::vector<double>& data() const { return data_; }

 private:
  std::vector<double> data_;
  double prior_sd_;
};

/// pi = pi0 = N(0, I_d): V vanishes, so every swap is accepted and Lambda = 0.
class ReferenceOnlyModel final : public TemperedModel {
 public:
  explicit ReferenceOnlyModel(int d);

  std::string name() const override { return "flat"; }
  std::size_t dimension() const override { return static_cast<std::size_t>(d_); }
  bool is_continuous() const override { return true; }

  double reference_potential(const State& x) const override;
  double potential(const State&) const override { return 0.0; }

  bool has_exact_reference() const override { return true; }
  State sample_reference(RandomStream& rng) const override;
  bool has_exact_tempered_sampler() const override { return true; }
  State sample_tempered(double beta, RandomStream& rng) const override;

  ExplorationSpec default_exploration() const override;

  bool has_analytic_barrier() const override { return true; }
  double local_barrier(double) const override { return 0.0; }
  double global_barrier(double) const override { return 0.0; }
  double log_partition(double) const override { return 0.0; }

 private:
  int d_;
};

}  // namespace nrpt
