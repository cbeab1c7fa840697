#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "nrpt/model.hpp"
#include "nrpt/random.hpp"
#include "nrpt/tempering.hpp"

namespace nrpt {

/// Per-pair swap probabilities s^{(i-1,i)} of an idealized sampler whose swap
/// indicators are independent Bernoulli draws.
struct EleChainSpec {
  std::vector<double> s;
  Scheme scheme = Scheme::kDeo;

  std::size_t last() const { return s.size(); }
};

/// Throws ConfigError unless 1 <= N and every s lies in (0, 1].
void validate_ele_spec(const EleChainSpec& spec);

/// Index of the lifted state (i, eps) in kernel matrices: 2 i + (eps > 0).
inline std::size_t lifted_index(std::size_t i, int eps) { return 2 * i + (eps > 0 ? 1 : 0); }

/// Transition matrix of the index process on {0..N} x {-1,+1}. A machine at
/// (i, eps) moves to i + eps with the swap probability of that pair (staying
/// put at the boundary). SEO then draws eps uniformly; DEO keeps eps after a
/// successful move and reverses it otherwise.
Eigen::MatrixXd ele_index_kernel(const EleChainSpec& spec);

/// Marginal kernel on {0..N} of the SEO index process (eps is independent and
/// uniform at every step).
Eigen::MatrixXd seo_index_marginal(const EleChainSpec& spec);

/// sum_i (1 - s_i) / s_i, with compensated summation.
double communication_inefficiency(const std::vector<double>& s);

/// Expected round-trip time: 2(N+1)N + 2(N+1)E for SEO, 2(N+1) + 2(N+1)E for DEO.
double expected_round_trip(const EleChainSpec& spec);

/// 1/(2N + 2E) for SEO, 1/(2 + 2E) for DEO.
double round_trip_rate_formula(const EleChainSpec& spec);

struct EleSimulation {
  std::uint64_t scans = 0;
  double tau = 0.0;
  RoundTripLedger ledger;
};

/// Runs the joint index process of all N+1 machines with independent
/// Bernoulli(s_i) acceptances on the proposed parity class.
EleSimulation simulate_ele_index(const EleChainSpec& spec, std::uint64_t n_scans,
                                 const StreamKey& key);

struct SwapEstimates {
  double s_hat = 0.0;
  double s_se = 0.0;
  double r_hat = 0.0;
  double r_se = 0.0;
  double lambda_mc = 0.0;  // 0.5 mean |V1 - V2| at beta
  double lambda_se = 0.0;
};

/// Monte Carlo swap, rejection and local barrier functions from exact tempered
/// draws. Throws ConfigError when the model cannot sample pi^(beta) exactly.
SwapEstimates mc_swap_functions(const TemperedModel& model, double beta, double beta_prime,
                                std::size_t n_samples, const StreamKey& key);

/// Exact rejection function r(beta, beta') = 1 - E[alpha] for the isotropic
/// Gaussian pair, by one-dimensional adaptive quadrature over the chi-square
/// law of the lower chain with the inner expectation in closed form.
double gaussian_rejection(double beta, double beta_prime, int d, double sigma0, double sigma);

struct PdmpEvent {
  double time = 0.0;
  double position = 0.0;
  int velocity = 0;   // after the event
  bool flip = false;  // false: boundary reflection
};

struct PdmpPath {
  double horizon = 0.0;
  double start_position = 0.0;
  int start_velocity = 1;
  std::vector<PdmpEvent> events;

  double position_at(double t) const;
  /// Time spent in each of `bins` equal cells of [0, 1].
  std::vector<double> occupation(std::size_t bins) const;
  /// Waiting times between consecutive flips (reflections excluded).
  std::vector<double> inter_flip_times() const;
  /// Durations of excursions 0 -> 1 -> 0 measured between visits to 0.
  std::vector<double> round_trip_times() const;
};

/// W moves at unit speed in direction eps; eps reverses at rate rate_fn(W)
/// (simulated by thinning against rate_bound) and at the boundaries.
/// Throws ConfigError if rate_bound is not finite or the rate exceeds it.
PdmpPath simulate_pdmp(const std::function<double(double)>& rate_fn, double rate_bound,
                       double horizon, const StreamKey& key, double start_position = 0.0,
                       int start_velocity = 1);

/// Euler scheme for Brownian motion on [0, 1] with reflection at both ends.
std::vector<double> simulate_reflected_bm(double horizon, double dt, const StreamKey& key,
                                          double start = 0.5);

/// Mean hitting time of 1 from 0 for the discretized reflected motion.
double reflected_bm_passage_time(double dt, std::size_t replications, const StreamKey& key);

}  // namespace nrpt
