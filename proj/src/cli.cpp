#include "nrpt/cli.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <iostream>
#include <numeric>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "nrpt/adapt.hpp"
#include "nrpt/barrier.hpp"
#include "nrpt/errors.hpp"
#include "nrpt/estimators.hpp"
#include "nrpt/exploration.hpp"
#include "nrpt/io.hpp"
#include "nrpt/models.hpp"
#include "nrpt/theory.hpp"

namespace nrpt {

namespace {

using json = nlohmann::ordered_json;

const char* scheme_name(Scheme scheme) { return scheme == Scheme::kDeo ? "deo" : "seo"; }

json config_json(const RunConfig& c) {
  json j;
  j["model"] = c.model;
  if (c.model == "gaussian" || c.model == "flat") j["d"] = c.d;
  if (c.model == "gaussian") {
    j["sigma0"] = c.sigma0;
    j["sigma"] = c.sigma;
  }
  if (c.model == "discrete") {
    j["k"] = c.k;
    j["a"] = c.a;
  }
  if (c.model == "ising") {
    j["m"] = c.m;
    j["mu"] = c.mu;
  }
  if (c.model == "mixture") {
    j["num_obs"] = c.num_obs;
    j["separation"] = c.separation;
    j["prior_sd"] = c.prior_sd;
    j["data_seed"] = c.data_seed;
  }
  j["scheme"] = c.scheme;
  j["chains"] = c.chains;
  j["cores"] = c.cores;
  j["scans"] = c.scans;
  j["tune"] = c.tune;
  j["nexpl"] = c.nexpl;
  j["explore"] = c.explore;
  j["seed"] = c.seed.value_or(0);
  j["threads"] = c.threads;
  if (c.schedule_file) j["schedule"] = c.schedule_file->string();
  return j;
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
}

StreamKey root_key(const RunConfig& config) {
  if (!config.seed) throw ConfigError("--seed is required");
  return StreamKey(*config.seed);
}

void prepare_output(const RunConfig& config) {
  std::error_code ec;
  std::filesystem::create_directories(config.out, ec);
  if (ec) throw ConfigError("cannot create output directory " + config.out.string());
}

void write_samples(const std::filesystem::path& path, const std::vector<State>& samples,
                   std::size_t dim) {
  std::vector<std::string> header{"scan"};
  for (std::size_t i = 0; i < dim; ++i) header.push_back("x" + std::to_string(i));
  CsvWriter csv(path, header);
  for (std::size_t s = 0; s < samples.size(); ++s) {
    csv.add(static_cast<std::uint64_t>(s + 1));
    for (double v : samples[s]) csv.add(v);
    csv.end_row();
  }
}

void write_trips(const std::filesystem::path& path, const RoundTripLedger& ledger) {
  CsvWriter csv(path, {"machine", "trip_index", "start_scan", "end_scan"});
  for (const RoundTrip& t : ledger.trip_log()) {
    csv.add(static_cast<std::uint64_t>(t.machine))
        .add(static_cast<std::uint64_t>(t.trip_index))
        .add(t.start_scan)
        .add(t.end_scan);
    csv.end_row();
  }
}

void write_trace(const std::filesystem::path& path, const std::vector<IndexTraceRow>& trace) {
  CsvWriter csv(path, {"scan", "machine", "index", "epsilon"});
  for (const IndexTraceRow& r : trace) {
    csv.add(r.scan)
        .add(static_cast<std::uint64_t>(r.machine))
        .add(static_cast<std::uint64_t>(r.index))
        .add(r.epsilon);
    csv.end_row();
  }
}

void require_positive(std::uint64_t value, const char* what) {
  if (value == 0) throw ConfigError(std::string(what) + " must be positive");
}

}  // namespace

std::unique_ptr<TemperedModel> make_model(const RunConfig& c) {
  if (c.model == "gaussian") return std::make_unique<GaussianModel>(c.d, c.sigma0, c.sigma);
  if (c.model == "discrete") return std::make_unique<DiscreteMultimodal>(c.k, c.a);
  if (c.model == "ising") return std::make_unique<IsingModel>(c.m, c.mu);
  if (c.model == "mixture") {
    return std::make_unique<GaussianMixturePosterior>(c.num_obs, c.separation, c.prior_sd,
                                                      c.data_seed);
  }
  if (c.model == "flat") return std::make_unique<ReferenceOnlyModel>(c.d);
  throw ConfigError("unknown model '" + c.model + "'");
}

Scheme parse_scheme(const std::string& name) {
  if (name == "deo") return Scheme::kDeo;
  if (name == "seo") return Scheme::kSeo;
  throw ConfigError("unknown scheme '" + name + "' (expected deo or seo)");
}

ExplorationSpec exploration_for(const TemperedModel& model, const RunConfig& c) {
  ExplorationSpec spec = model.default_exploration();
  if (c.explore == "exact_reference") {
    spec.kind = ExplorationKind::kExactReference;
  } else if (c.explore == "rwmh") {
    spec.kind = ExplorationKind::kRwmh;
  } else if (c.explore == "slice") {
    spec.kind = ExplorationKind::kSlice;
  } else if (c.explore == "model_specific") {
    spec.kind = ExplorationKind::kModelSpecific;
  } else if (c.explore != "default") {
    throw ConfigError("unknown exploration kind '" + c.explore + "'");
  }
  if (c.nexpl < 0) throw ConfigError("--nexpl must be non-negative");
  if (c.nexpl > 0) spec.n_expl = c.nexpl;
  if (c.explore != "default" || c.step_size != 1.0) spec.step_size = c.step_size;
  if (c.explore != "default" || c.slice_width != 1.0) spec.slice_width = c.slice_width;
  validate_exploration(model, spec);
  return spec;
}

void cmd_adapt(const RunConfig& config) {
  const StreamKey key = root_key(config);
  const auto model = make_model(config);
  AdaptOptions options;
  options.total_cores = config.cores;
  options.n_tune = config.tune;
  options.n_sample = config.scans;
  options.scheme = parse_scheme(config.scheme);
  options.exploration = exploration_for(*model, config);
  options.keep_samples = false;
  options.threads = config.threads;
  prepare_output(config);

  const AdaptResult result = nrpt_adapt(*model, options, key);

  {
    CsvWriter csv(config.out / "schedule.csv", {"round", "chain", "beta"});
    for (const RoundReport& r : result.rounds) {
      for (std::size_t i = 0; i < r.schedule.num_chains(); ++i) {
        csv.add(r.round).add(static_cast<std::uint64_t>(i)).add(r.schedule[i]);
        csv.end_row();
      }
    }
    // One past the last tuning round: the N*-chain schedule used for sampling.
    const int final_round = static_cast<int>(result.rounds.size()) + 1;
    for (std::size_t i = 0; i < result.optimal_schedule.num_chains(); ++i) {
      csv.add(final_round).add(static_cast<std::uint64_t>(i)).add(result.optimal_schedule[i]);
      csv.end_row();
    }
  }
  {
    CsvWriter csv(config.out / "rejections.csv", {"round", "pair", "beta_lo", "beta_hi", "rhat"});
    for (const RoundReport& r : result.rounds) {
      for (std::size_t p = 0; p < r.rhat.size(); ++p) {
        csv.add(r.round)
            .add(static_cast<std::uint64_t>(p))
            .add(r.schedule[p])
            .add(r.schedule[p + 1])
            .add(r.rhat[p]);
        csv.end_row();
      }
    }
  }
  {
    CsvWriter csv(config.out / "barrier.csv", {"beta", "lambda_hat", "Lambda_hat"});
    constexpr int kPoints = 1001;
    for (int i = 0; i < kPoints; ++i) {
      const double beta = static_cast<double>(i) / (kPoints - 1);
      csv.add(beta).add(result.barrier.derivative(beta)).add(result.barrier(beta));
      csv.end_row();
    }
  }

  json summary;
  summary["Lambda_hat"] = result.barrier.total();
  summary["tau_bound"] = result.plan.tau_bound;
  summary["N_star"] = result.plan.n_star;
  summary["k_star"] = result.plan.k_star;
  double tau = 0.0;
  double log_z = 0.0;
  if (!result.copies.empty()) {
    for (const RunResult& copy : result.copies) {
      tau += observed_round_trip_rate(copy.ledger, config.scans);
      log_z += log_partition_ratio(copy.energies, result.optimal_schedule);
    }
    log_z /= static_cast<double>(result.copies.size());
  } else if (!result.rounds.empty()) {
    tau = result.rounds.back().observed_tau;
    log_z = result.rounds.back().log_z;
  }
  summary["observed_tau"] = tau;
  summary["logZ"] = log_z;
  json rounds = json::array();
  for (const RoundReport& r : result.rounds) {
    rounds.push_back({{"round", r.round},
                      {"scans", r.scans},
                      {"Lambda_hat", r.barrier.total()},
                      {"logZ", r.log_z},
                      {"observed_tau", r.observed_tau}});
  }
  summary["rounds"] = rounds;
  summary["config"] = config_json(config);
  write_json(config.out / "summary.json", summary);
}

void cmd_run(const RunConfig& config) {
  const StreamKey key = root_key(config);
  const auto model = make_model(config);
  require_positive(config.scans, "--scans");
  AnnealingSchedule schedule = AnnealingSchedule::uniform(std::max<std::size_t>(config.chains, 1));
  if (config.schedule_file) {
    schedule = AnnealingSchedule(read_schedule_file(*config.schedule_file));
  } else if (config.chains == 0) {
    throw ConfigError("--chains must be positive");
  }
  RunOptions options;
  options.scheme = parse_scheme(config.scheme);
  options.nscan = config.scans;
  options.exploration = exploration_for(*model, config);
  options.trace_index = config.trace_index;
  options.threads = config.threads;
  prepare_output(config);

  const RunResult result = run_chain(*model, schedule, options, key.child(Purpose::kSampling));

  write_samples(config.out / "samples.csv", result.samples, model->dimension());
  write_trips(config.out / "trips.csv", result.ledger);
  if (config.trace_index) write_trace(config.out / "index_trace.csv", result.trace);

  const std::vector<double> rhat = result.rejections.rhat();
  json summary;
  summary["N"] = schedule.last();
  summary["schedule"] = std::vector<double>(schedule.betas().begin(), schedule.betas().end());
  summary["rhat"] = rhat;
  summary["Lambda_hat"] = std::accumulate(rhat.begin(), rhat.end(), 0.0);
  std::vector<double> accept_rate;
  for (std::size_t p = 0; p < result.proposed.size(); ++p) {
    accept_rate.push_back(result.proposed[p] == 0
                              ? 0.0
                              : static_cast<double>(result.accepted[p]) /
                                    static_cast<double>(result.proposed[p]));
  }
  summary["swap_accept_rate"] = accept_rate;
  summary["round_trips"] = result.ledger.total_trips();
  summary["restarts"] = result.ledger.total_restarts();
  summary["observed_tau"] = observed_round_trip_rate(result.ledger, config.scans);
  summary["logZ"] = log_partition_ratio(result.energies, schedule);
  if (model->has_analytic_barrier()) {
    summary["Lambda"] = model->global_barrier(1.0);
    summary["logZ_exact"] = model->log_partition(1.0);
  }
  summary["config"] = config_json(config);
  write_json(config.out / "summary.json", summary);
}

void cmd_theory(const RunConfig& config) {
  const StreamKey key = root_key(config);
  require_positive(config.scans, "--scans");
  std::vector<double> s = config.swap_probs;
  if (s.empty()) throw ConfigError("--s is required for theory");
  if (s.size() == 1) {
    if (config.chains == 0) throw ConfigError("--chains must be positive");
    s.assign(config.chains, s.front());
  }
  prepare_output(config);

  CsvWriter csv(config.out / "theory.csv",
                {"scheme", "N", "inefficiency", "expected_round_trip", "tau_formula", "tau_sim",
                 "round_trips", "scans"});
  for (Scheme scheme : {Scheme::kDeo, Scheme::kSeo}) {
    const EleChainSpec spec{s, scheme};
    validate_ele_spec(spec);
    const EleSimulation sim =
        simulate_ele_index(spec, config.scans, key.child(Purpose::kSimulation, scheme == Scheme::kDeo ? 0 : 1));
    csv.add(std::string(scheme_name(scheme)))
        .add(static_cast<std::uint64_t>(spec.last()))
        .add(communication_inefficiency(s))
        .add(expected_round_trip(spec))
        .add(round_trip_rate_formula(spec))
        .add(sim.tau)
        .add(sim.ledger.total_trips())
        .add(sim.scans);
    csv.end_row();
  }

  if (config.pdmp_rate >= 0.0) {
    if (!std::isfinite(config.pdmp_rate) || !(config.horizon > 0.0)) {
      throw ConfigError("--pdmp-rate must be finite and --horizon positive");
    }
    const double rate = config.pdmp_rate;
    const PdmpPath path = simulate_pdmp([rate](double) { return rate; }, rate, config.horizon,
                                        key.child(Purpose::kSimulation, 2));
    CsvWriter events(config.out / "pdmp.csv", {"time", "position", "velocity", "flip"});
    events.add(0.0).add(path.start_position).add(path.start_velocity).add(0);
    events.end_row();
    for (const PdmpEvent& e : path.events) {
      events.add(e.time).add(e.position).add(e.velocity).add(e.flip ? 1 : 0);
      events.end_row();
    }
  }
}

void cmd_logz(const RunConfig& config) {
  const StreamKey key = root_key(config);
  const auto model = make_model(config);
  AdaptOptions options;
  options.total_cores = config.cores;
  options.n_tune = config.tune;
  // Only the tuning rounds are reported: the N* grid of the sampling phase is
  // usually far too coarse for the trapezoid rule.
  options.n_sample = 0;
  options.scheme = parse_scheme(config.scheme);
  options.exploration = exploration_for(*model, config);
  options.keep_samples = false;
  options.threads = config.threads;
  prepare_output(config);

  const AdaptResult result = nrpt_adapt(*model, options, key);
  CsvWriter csv(config.out / "logz.csv", {"round", "estimate"});
  for (const RoundReport& r : result.rounds) {
    csv.add(r.round).add(r.log_z);
    csv.end_row();
  }
}

int run_cli(const std::vector<std::string>& args) {
  RunConfig c;
  CLI::App app{"Non-reversible parallel tempering"};
  app.set_config("--config", "", "TOML-style file of option values");
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 0;
  std::string schedule_file;
  std::string out = ".";
  app.add_option("--model", c.model, "gaussian | discrete | ising | mixture | flat");
  app.add_option("--d", c.d, "dimension (gaussian, flat)");
  app.add_option("--sigma0", c.sigma0, "reference scale (gaussian)");
  app.add_option("--sigma", c.sigma, "target scale (gaussian)");
  app.add_option("--k", c.k, "half-width of the support (discrete)");
  app.add_option("--a", c.a, "mode weight base (discrete)");
  app.add_option("--m", c.m, "lattice side (ising)");
  app.add_option("--mu", c.mu, "external field (ising)");
  app.add_option("--num-obs", c.num_obs, "observations (mixture)");
  app.add_option("--separation", c.separation, "component distance (mixture)");
  app.add_option("--prior-sd", c.prior_sd, "prior scale (mixture)");
  app.add_option("--data-seed", c.data_seed, "data seed (mixture)");
  app.add_option("--scheme", c.scheme, "deo | seo");
  app.add_option("--chains", c.chains, "N, the index of the last chain");
  app.add_option("--cores", c.cores, "total cores for adaptation");
  app.add_option("--scans", c.scans, "sampling scans");
  app.add_option("--tune", c.tune, "tuning scans budget");
  app.add_option("--nexpl", c.nexpl, "exploration steps per scan (0: model default)");
  app.add_option("--explore", c.explore,
                 "default | exact_reference | rwmh | slice | model_specific");
  app.add_option("--step-size", c.step_size, "rwmh proposal scale");
  app.add_option("--slice-width", c.slice_width, "slice bracket width");
  auto* seed_opt = app.add_option("--seed", seed, "root random seed");
  app.add_option("--out", out, "output directory");
  app.add_flag("--trace-index", c.trace_index, "write index_trace.csv");
  auto* schedule_opt = app.add_option("--schedule", schedule_file, "schedule file");
  app.add_option("--threads", c.threads, "exploration threads");
  app.add_option("--s", c.swap_probs, "swap probabilities (one value broadcasts)")
      ->delimiter(',');
  app.add_option("--pdmp-rate", c.pdmp_rate, "constant flip rate of the PDMP path");
  app.add_option("--horizon", c.horizon, "PDMP time horizon");

  auto* adapt = app.add_subcommand("adapt", "tune the schedule, then sample with k* copies");
  auto* run = app.add_subcommand("run", "sample on a fixed schedule");
  auto* theory = app.add_subcommand("theory", "round-trip formulas and index simulations");
  auto* logz = app.add_subcommand("logz", "log normalizing-constant estimates per round");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (seed_opt->count() > 0) c.seed = seed;
  if (schedule_opt->count() > 0) c.schedule_file = schedule_file;
  c.out = out;

  try {
    if (adapt->parsed()) cmd_adapt(c);
    if (run->parsed()) cmd_run(c);
    if (theory->parsed()) cmd_theory(c);
    if (logz->parsed()) cmd_logz(c);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace nrpt
