#pragma once

#include <cstddef>

#include "nrpt/ensemble.hpp"
#include "nrpt/model.hpp"
#include "nrpt/random.hpp"
#include "nrpt/schedule.hpp"

namespace nrpt {

/// Independent draw from pi0. Throws ConfigError when the model has none.
State reference_sample(const TemperedModel& model, RandomStream& rng);

/// One isotropic Gaussian random-walk Metropolis-Hastings step targeting
/// pi^(beta). Returns whether the proposal was accepted.
bool rwmh_step(State& x, double beta, const TemperedModel& model, double step_size,
               RandomStream& rng);

/// One univariate slice-sampling update of `coordinate`: bracket by doubling,
/// then shrink with the acceptability test for doubled intervals.
/// Doubling stops after `max_doublings`. Throws NumericalError with the
/// bracket in the message if both of its ends still lie inside the slice, on
/// a non-finite current density, or if shrinkage does not terminate.
void slice_sample_step(State& x, std::size_t coordinate, double beta, const TemperedModel& model,
                       double width, int max_doublings, RandomStream& rng);

/// Applies the chain's kernel spec.n_expl times. Chain 0 always takes an exact
/// reference draw when the model provides one.
void explore_chain(State& x, std::size_t chain, double beta, const TemperedModel& model,
                   const ExplorationSpec& spec, RandomStream& rng);

/// Explores every chain with its own stream keyed by (chain, scan). The
/// permutation is never touched. Energies are refreshed.
void explore_ensemble(ReplicaEnsemble& ensemble, const AnnealingSchedule& schedule,
                      const TemperedModel& model, const ExplorationSpec& spec,
                      const StreamKey& key, int threads = 1);

/// Rejects n_expl < 1, unusable kinds for the model, and bad kernel parameters.
void validate_exploration(const TemperedModel& model, const ExplorationSpec& spec);

}  // namespace nrpt
