#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "nrpt/ensemble.hpp"
#include "nrpt/model.hpp"
#include "nrpt/random.hpp"
#include "nrpt/schedule.hpp"
#include "nrpt/stats.hpp"

namespace nrpt {

/// DEO alternates even and odd pair sets deterministically; SEO picks one at random.
enum class Scheme { kDeo, kSeo };

/// exp(min(0, (beta_hi - beta_lo)(v_hi - v_lo))). Argument order of the two
/// (beta, v) couples does not matter. Throws NumericalError on non-finite input.
double swap_accept_prob(double beta_lo, double beta_hi, double v_lo, double v_hi);

/// Parity class proposed at `scan`: 0 proposes pairs 0, 2, 4, ...; 1 proposes 1, 3, ...
/// DEO uses scan % 2; SEO draws a fair coin addressed by the scan number.
unsigned proposal_parity(Scheme scheme, std::uint64_t scan, const StreamKey& key);

inline bool is_proposed(std::size_t pair, unsigned parity) { return pair % 2 == parity; }

struct PairOutcome {
  bool proposed = false;
  double alpha = 0.0;
  bool accepted = false;
  bool swapped = false;  // proposed && accepted
};

struct ScanRecord {
  std::uint64_t scan = 0;
  unsigned parity = 0;
  std::vector<PairOutcome> pairs;
};

/// One communication phase. Acceptance draws are addressed by (pair, scan) so
/// the outcome does not depend on evaluation order. Increments scan_count.
/// With restrict_to_proposed, alpha is only evaluated on proposed pairs
/// (the others report alpha = 0 and are not meant to be accumulated).
ScanRecord communication_scan(ReplicaEnsemble& ensemble, const AnnealingSchedule& schedule,
                              Scheme scheme, const StreamKey& key,
                              bool restrict_to_proposed = false);

/// Communication followed by exploration of every chain.
ScanRecord pt_scan(ReplicaEnsemble& ensemble, const AnnealingSchedule& schedule,
                   const TemperedModel& model, Scheme scheme, const ExplorationSpec& spec,
                   const StreamKey& key, int threads = 1, bool restrict_to_proposed = false);

/// Per machine j: the chain index I^j it currently holds and its direction eps^j.
struct IndexProcessState {
  std::vector<std::size_t> index;
  std::vector<int> direction;
};

/// Direction of a machine sitting at `index` when the next scan proposes
/// `parity`: +1 toward a proposed pair (index, index+1), -1 toward a proposed
/// pair (index-1, index), and outward (+1 at N, -1 at 0) when neither exists.
int index_direction(std::size_t index, std::size_t last, unsigned parity);

/// I_0^j = machine_to_chain[j], directions set for the first scan's parity.
IndexProcessState initial_index_process(const std::vector<std::size_t>& machine_to_chain,
                                        unsigned first_parity);

/// Moves each machine by eps when the pair in that direction swapped, then
/// points eps at the pair proposed by the next scan. Throws std::logic_error
/// if the result is not a permutation.
void advance_index_process(IndexProcessState& ips, const ScanRecord& record,
                           unsigned next_parity);

struct RoundTrip {
  std::size_t machine = 0;
  std::size_t trip_index = 0;
  std::uint64_t start_scan = 0;
  std::uint64_t end_scan = 0;
};

/// Restarts are visits to (N, +1) after leaving (0, -1); a round trip is the
/// next return to (0, -1). The clock starts at each machine's first (0, -1).
/// With lifted = false only the index is checked (0 and N), which is the
/// hitting-time convention under which the SEO round-trip formula holds.
class RoundTripLedger {
 public:
  explicit RoundTripLedger(std::size_t num_machines = 0, bool lifted = true);

  void tally(const IndexProcessState& ips, std::uint64_t scan);

  std::size_t num_machines() const { return phase_.size(); }
  std::uint64_t restarts(std::size_t machine) const { return restarts_[machine]; }
  std::uint64_t trips(std::size_t machine) const { return trip_counts_[machine]; }
  std::uint64_t total_trips() const;
  std::uint64_t total_restarts() const;
  const std::vector<RoundTrip>& trip_log() const { return trip_log_; }

 private:
  enum class Phase { kSeekingDown, kSeekingUp };
  bool lifted_ = true;
  std::vector<Phase> phase_;
  std::vector<std::optional<std::uint64_t>> last_down_;
  std::vector<std::uint64_t> restarts_;
  std::vector<std::uint64_t> trip_counts_;
  std::vector<RoundTrip> trip_log_;
};

struct IndexTraceRow {
  std::uint64_t scan = 0;
  std::size_t machine = 0;
  std::size_t index = 0;
  int epsilon = 0;
};

struct RunOptions {
  Scheme scheme = Scheme::kDeo;
  std::uint64_t nscan = 0;
  ExplorationSpec exploration;
  bool restrict_to_proposed = false;
  bool keep_samples = true;
  bool trace_index = false;
  int threads = 1;
};

struct RunResult {
  std::vector<State> samples;  // chain N after each scan
  RejectionStats rejections;
  std::vector<std::uint64_t> proposed;
  std::vector<std::uint64_t> accepted;
  RoundTripLedger ledger;
  std::vector<IndexTraceRow> trace;
  EnergySummaries energies;
  ReplicaEnsemble final_ensemble;
};

/// nscan PT scans from `start` (or from exact reference draws in every slot).
/// Throws ConfigError for nscan = 0 or an inconsistent starting ensemble.
RunResult run_chain(const TemperedModel& model, const AnnealingSchedule& schedule,
                    const RunOptions& options, const StreamKey& key,
                    std::optional<ReplicaEnsemble> start = std::nullopt);

}  // namespace nrpt
