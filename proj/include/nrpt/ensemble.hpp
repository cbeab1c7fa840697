#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "nrpt/model.hpp"
#include "nrpt/schedule.hpp"

namespace nrpt {

/// N+1 chain states stored chain-major (slot i holds the state at beta_i),
/// their cached potentials V, and the machine <-> chain permutation.
struct ReplicaEnsemble {
  std::vector<State> states;
  std::vector<double> energies;
  std::vector<std::size_t> machine_to_chain;
  std::vector<std::size_t> chain_to_machine;
  std::uint64_t scan_count = 0;

  /// Identity permutation, energies evaluated from the model.
  static ReplicaEnsemble from_states(std::vector<State> states, const TemperedModel& model);

  std::size_t size() const { return states.size(); }

  /// Exchanges slots `pair` and `pair + 1`, their energies and the owning machines.
  void swap_pair(std::size_t pair);

  /// Permutation and inverse agree, lengths match the schedule.
  bool is_consistent(const AnnealingSchedule& schedule) const;
};

/// Independent exact reference draws in every slot. Throws ConfigError when
/// the model has no exact reference sampler.
ReplicaEnsemble reference_ensemble(const TemperedModel& model, const AnnealingSchedule& schedule,
                                   const StreamKey& key);

}  // namespace nrpt
