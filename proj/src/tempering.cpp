#include "nrpt/tempering.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "nrpt/errors.hpp"
#include "nrpt/exploration.hpp"

namespace nrpt {

double swap_accept_prob(double beta_lo, double beta_hi, double v_lo, double v_hi) {
  if (!std::isfinite(v_lo) || !std::isfinite(v_hi) || !std::isfinite(beta_lo) ||
      !std::isfinite(beta_hi)) {
    throw NumericalError("non-finite input to swap acceptance");
  }
  const double log_ratio = (beta_hi - beta_lo) * (v_hi - v_lo);
  return log_ratio >= 0.0 ? 1.0 : std::exp(log_ratio);
}

unsigned proposal_parity(Scheme scheme, std::uint64_t scan, const StreamKey& key) {
  if (scheme == Scheme::kDeo) {
    return static_cast<unsigned>(scan % 2);
  }
  return key.child(Purpose::kParity).uniform_at(scan, 0) < 0.5 ? 0U : 1U;
}

ScanRecord communication_scan(ReplicaEnsemble& ensemble, const AnnealingSchedule& schedule,
                              Scheme scheme, const StreamKey& key, bool restrict_to_proposed) {
  const std::size_t num_pairs = schedule.num_pairs();
  ScanRecord record;
  record.scan = ensemble.scan_count;
  record.parity = proposal_parity(scheme, record.scan, key);
  record.pairs.resize(num_pairs);
  const StreamKey swap_key = key.child(Purpose::kSwap);

  // Alpha is evaluated on the pre-scan energies; proposed pairs are disjoint,
  // so applying the swaps afterwards is equivalent to applying them in place.
  for (std::size_t i = 0; i < num_pairs; ++i) {
    PairOutcome& out = record.pairs[i];
    out.proposed = is_proposed(i, record.parity);
    if (restrict_to_proposed && !out.proposed) {
      continue;
    }
    try {
      out.alpha = swap_accept_prob(schedule[i], schedule[i + 1], ensemble.energies[i],
                                   ensemble.energies[i + 1]);
    } catch (const NumericalError&) {
      throw NumericalError("non-finite potential in chain pair (" + std::to_string(i) + ", " +
                           std::to_string(i + 1) + ") at scan " + std::to_string(record.scan));
    }
    out.accepted = swap_key.uniform_at(i, record.scan) < out.alpha;
    out.swapped = out.proposed && out.accepted;
  }
  for (std::size_t i = 0; i < num_pairs; ++i) {
    if (record.pairs[i].swapped) {
      ensemble.swap_pair(i);
    }
  }
  ++ensemble.scan_count;
  return record;
}

ScanRecord pt_scan(ReplicaEnsemble& ensemble, const AnnealingSchedule& schedule,
                   const TemperedModel& model, Scheme scheme, const ExplorationSpec& spec,
                   const StreamKey& key, int threads, bool restrict_to_proposed) {
  ScanRecord record = communication_scan(ensemble, schedule, scheme, key, restrict_to_proposed);
  explore_ensemble(ensemble, schedule, model, spec, key, threads);
  return record;
}

int index_direction(std::size_t index, std::size_t last, unsigned parity) {
  if (index < last && is_proposed(index, parity)) {
    return +1;
  }
  if (index > 0 && is_proposed(index - 1, parity)) {
    return -1;
  }
  return index == last ? +1 : -1;
}

IndexProcessState initial_index_process(const std::vector<std::size_t>& machine_to_chain,
                                        unsigned first_parity) {
  IndexProcessState ips;
  ips.index = machine_to_chain;
  const std::size_t last = machine_to_chain.size() - 1;
  ips.direction.reserve(machine_to_chain.size());
  for (std::size_t i : machine_to_chain) {
    ips.direction.push_back(index_direction(i, last, first_parity));
  }
  return ips;
}

void advance_index_process(IndexProcessState& ips, const ScanRecord& record,
                           unsigned next_parity) {
  const std::size_t last = record.pairs.size();
  std::vector<char> seen(last + 1, 0);
  for (std::size_t j = 0; j < ips.index.size(); ++j) {
    std::size_t& i = ips.index[j];
    if (ips.direction[j] > 0 && i < last && record.pairs[i].swapped) {
      ++i;
    } else if (ips.direction[j] < 0 && i > 0 && record.pairs[i - 1].swapped) {
      --i;
    }
    if (seen[i]) {
      throw std::logic_error("index process is no longer a permutation at scan " +
                             std::to_string(record.scan));
    }
    seen[i] = 1;
    ips.direction[j] = index_direction(i, last, next_parity);
  }
}

RoundTripLedger::RoundTripLedger(std::size_t num_machines, bool lifted)
    : lifted_(lifted),
      phase_(num_machines, Phase::kSeekingDown),
      last_down_(num_machines),
      restarts_(num_machines, 0),
      trip_counts_(num_machines, 0) {}

void RoundTripLedger::tally(const IndexProcessState& ips, std::uint64_t scan) {
  const std::size_t last = ips.index.size() - 1;
  for (std::size_t j = 0; j < phase_.size(); ++j) {
    const std::size_t i = ips.index[j];
    const int eps = ips.direction[j];
    if (phase_[j] == Phase::kSeekingUp && i == last && (eps > 0 || !lifted_)) {
      ++restarts_[j];
      phase_[j] = Phase::kSeekingDown;
    } else if (phase_[j] == Phase::kSeekingDown && i == 0 && (eps < 0 || !lifted_)) {
      if (last_down_[j]) {
        trip_log_.push_back({j, trip_counts_[j], *last_down_[j], scan});
        ++trip_counts_[j];
      }
      last_down_[j] = scan;
      phase_[j] = Phase::kSeekingUp;
    }
  }
}

std::uint64_t RoundTripLedger::total_trips() const {
  std::uint64_t total = 0;
  for (auto t : trip_counts_) total += t;
  return total;
}

std::uint64_t RoundTripLedger::total_restarts() const {
  std::uint64_t total = 0;
  for (auto t : restarts_) total += t;
  return total;
}

RunResult run_chain(const TemperedModel& model, const AnnealingSchedule& schedule,
                    const RunOptions& options, const StreamKey& key,
                    std::optional<ReplicaEnsemble> start) {
  if (options.nscan == 0) {
    throw ConfigError("nscan must be at least 1");
  }
  validate_exploration(model, options.exploration);

  RunResult result;
  result.final_ensemble =
      start ? std::move(*start) : reference_ensemble(model, schedule, key.child(Purpose::kInit));
  ReplicaEnsemble& ensemble = result.final_ensemble;
  if (!ensemble.is_consistent(schedule)) {
    throw ConfigError("starting ensemble does not match the annealing schedule");
  }
  // Energies may come from a previous run of the same model; refresh anyway.
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    ensemble.energies[i] = model.potential(ensemble.states[i]);
  }

  const std::size_t num_pairs = schedule.num_pairs();
  result.rejections = RejectionStats(num_pairs);
  result.proposed.assign(num_pairs, 0);
  result.accepted.assign(num_pairs, 0);
  result.ledger = RoundTripLedger(schedule.num_chains(), options.scheme == Scheme::kDeo);
  result.energies = EnergySummaries(schedule.num_chains());
  if (options.keep_samples) {
    result.samples.reserve(options.nscan);
  }

  const std::uint64_t first_scan = ensemble.scan_count;
  IndexProcessState ips = initial_index_process(
      ensemble.machine_to_chain, proposal_parity(options.scheme, first_scan, key));
  auto record_trace = [&](std::uint64_t step) {
    if (!options.trace_index) return;
    for (std::size_t j = 0; j < ips.index.size(); ++j) {
      result.trace.push_back({step, j, ips.index[j], ips.direction[j]});
    }
  };
  result.ledger.tally(ips, 0);
  record_trace(0);

  for (std::uint64_t n = 0; n < options.nscan; ++n) {
    ScanRecord record = pt_scan(ensemble, schedule, model, options.scheme, options.exploration,
                                key, options.threads, options.restrict_to_proposed);
    for (std::size_t i = 0; i < num_pairs; ++i) {
      const PairOutcome& out = record.pairs[i];
      if (out.proposed || !options.restrict_to_proposed) {
        result.rejections.add(i, out.alpha);
      }
      if (out.proposed) {
        ++result.proposed[i];
        if (out.swapped) ++result.accepted[i];
      }
    }
    advance_index_process(ips, record,
                          proposal_parity(options.scheme, ensemble.scan_count, key));
    if (ips.index != ensemble.machine_to_chain) {
      throw std::logic_error("index process diverged from the ensemble permutation");
    }
    result.ledger.tally(ips, n + 1);
    record_trace(n + 1);
    result.energies.add(ensemble.energies);
    if (options.keep_samples) {
      result.samples.push_back(ensemble.states.back());
    }
  }
  return result;
}

}  // namespace nrpt
