#include "nrpt/ensemble.hpp"

#include <numeric>
#include <utility>

#include "nrpt/errors.hpp"

namespace nrpt {

ReplicaEnsemble ReplicaEnsemble::from_states(std::vector<State> states,
                                             const TemperedModel& model) {
  ReplicaEnsemble e;
  e.energies.reserve(states.size());
  for (const State& x : states) {
    e.energies.push_back(model.potential(x));
  }
  e.states = std::move(states);
  e.machine_to_chain.resize(e.states.size());
  std::iota(e.machine_to_chain.begin(), e.machine_to_chain.end(), std::size_t{0});
  e.chain_to_machine = e.machine_to_chain;
  return e;
}

void ReplicaEnsemble::swap_pair(std::size_t pair) {
  std::swap(states[pair], states[pair + 1]);
  std::swap(energies[pair], energies[pair + 1]);
  std::swap(chain_to_machine[pair], chain_to_machine[pair + 1]);
  machine_to_chain[chain_to_machine[pair]] = pair;
  machine_to_chain[chain_to_machine[pair + 1]] = pair + 1;
}

bool ReplicaEnsemble::is_consistent(const AnnealingSchedule& schedule) const {
  const std::size_t n = schedule.num_chains();
  if (states.size() != n || energies.size() != n || machine_to_chain.size() != n ||
      chain_to_machine.size() != n) {
    return false;
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (machine_to_chain[j] >= n || chain_to_machine[machine_to_chain[j]] != j) {
      return false;
    }
  }
  return true;
}

ReplicaEnsemble reference_ensemble(const TemperedModel& model, const AnnealingSchedule& schedule,
                                   const StreamKey& key) {
  if (!model.has_exact_reference()) {
    throw ConfigError("model '" + model.name() +
                      "' has no exact reference sampler to initialize the ensemble");
  }
  std::vector<State> states;
  states.reserve(schedule.num_chains());
  for (std::size_t i = 0; i < schedule.num_chains(); ++i) {
    RandomStream rng = key.child(Purpose::kInit, i).stream();
    states.push_back(model.sample_reference(rng));
  }
  return ReplicaEnsemble::from_states(std::move(states), model);
}

}  // namespace nrpt
