#include "nrpt/adapt.hpp"

#include <bit>
#include <cmath>
#include <optional>
#include <utility>

#include "nrpt/ensemble.hpp"
#include "nrpt/errors.hpp"
#include "nrpt/estimators.hpp"
#include "nrpt/exploration.hpp"

namespace nrpt {

namespace {

// Chain i of the new schedule starts from the tuned state whose beta is nearest.
ReplicaEnsemble transplant(const ReplicaEnsemble& from, const AnnealingSchedule& from_schedule,
                           const AnnealingSchedule& to_schedule, const TemperedModel& model) {
  std::vector<State> states;
  states.reserve(to_schedule.num_chains());
  for (std::size_t i = 0; i < to_schedule.num_chains(); ++i) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < from_schedule.num_chains(); ++j) {
      if (std::abs(from_schedule[j] - to_schedule[i]) <
          std::abs(from_schedule[best] - to_schedule[i])) {
        best = j;
      }
    }
    states.push_back(from.states[best]);
  }
  return ReplicaEnsemble::from_states(std::move(states), model);
}

}  // namespace

AdaptResult nrpt_adapt(const TemperedModel& model, const AdaptOptions& options,
                       const StreamKey& key) {
  if (options.n_tune < 2) {
    throw ConfigError("tuning budget must be at least 2 scans");
  }
  if (options.total_cores < 2) {
    throw ConfigError("adaptation needs at least two cores");
  }
  validate_exploration(model, options.exploration);
  const int max_round = std::bit_width(options.n_tune) - 1;

  AdaptResult result;
  AnnealingSchedule schedule = AnnealingSchedule::uniform(options.total_cores);
  std::optional<ReplicaEnsemble> ensemble;
  std::uint64_t scans = 1;

  for (int round = 1; round <= max_round; ++round) {
    RunOptions run;
    run.scheme = options.scheme;
    run.nscan = scans;
    run.exploration = options.exploration;
    run.keep_samples = false;
    run.threads = options.threads;
    RunResult out = run_chain(model, schedule, run, key.child(Purpose::kRound, round),
                              std::move(ensemble));

    RoundReport report;
    report.round = round;
    report.scans = scans;
    report.schedule = schedule;
    report.rhat = out.rejections.rhat();
    report.barrier = BarrierEstimate::fit(std::vector<double>(schedule.betas().begin(),
                                                              schedule.betas().end()),
                                          cumulative_barrier_knots(report.rhat, schedule));
    report.log_z = log_partition_ratio(out.energies, schedule);
    report.observed_tau = observed_round_trip_rate(out.ledger, scans);
    result.barrier = report.barrier;
    ensemble = std::move(out.final_ensemble);

    const AnnealingSchedule next = update_schedule(report.barrier, options.total_cores);
    result.rounds.push_back(std::move(report));
    // Slots keep their states; only the betas they run at change.
    schedule = next;
    scans *= 2;
  }
  result.tuned_schedule = schedule;

  result.plan = plan_parallelism(result.barrier.total(), options.total_cores);
  result.optimal_schedule = update_schedule(result.barrier, result.plan.n_star);

  if (options.n_sample > 0) {
    const ReplicaEnsemble start =
        transplant(*ensemble, result.rounds.back().schedule, result.optimal_schedule, model);
    for (std::size_t copy = 0; copy < result.plan.k_star; ++copy) {
      RunOptions run;
      run.scheme = options.scheme;
      run.nscan = options.n_sample;
      run.exploration = options.exploration;
      run.keep_samples = options.keep_samples;
      run.trace_index = options.trace_index;
      run.threads = options.threads;
      result.copies.push_back(
          run_chain(model, result.optimal_schedule, run, key.child(Purpose::kCopy, copy), start));
    }
  }
  return result;
}

}  // namespace nrpt
