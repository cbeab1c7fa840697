#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nrpt/model.hpp"
#include "nrpt/tempering.hpp"

namespace nrpt {

/// Everything a subcommand needs. Counts are validated by the commands.
struct RunConfig {
  std::string model = "gaussian";
  // gaussian / flat
  int d = 1;
  double sigma0 = 1.0;
  double sigma = 0.5;
  // discrete
  int k = 2;
  double a = 3.0;
  // ising
  int m = 5;
  double mu = 0.0;
  // mixture
  int num_obs = 20;
  double separation = 4.0;
  double prior_sd = 10.0;
  std::uint64_t data_seed = 7;

  std::string scheme = "deo";
  std::size_t chains = 10;      // N for run / theory
  std::size_t cores = 8;        // total cores for adapt / logz
  std::uint64_t scans = 1000;   // sampling scans (run, adapt copies, theory simulation)
  std::uint64_t tune = 1024;    // tuning budget
  int nexpl = 0;                // 0 keeps the model default
  std::string explore = "default";
  double step_size = 1.0;
  double slice_width = 1.0;
  std::optional<std::uint64_t> seed;
  std::filesystem::path out = ".";
  bool trace_index = false;
  std::optional<std::filesystem::path> schedule_file;
  int threads = 1;
  // theory
  std::vector<double> swap_probs;  // per pair; one value is broadcast to all pairs
  double pdmp_rate = -1.0;         // negative skips the PDMP row
  double horizon = 1e4;
};

std::unique_ptr<TemperedModel> make_model(const RunConfig& config);
Scheme parse_scheme(const std::string& name);
ExplorationSpec exploration_for(const TemperedModel& model, const RunConfig& config);

void cmd_adapt(const RunConfig& config);
void cmd_run(const RunConfig& config);
void cmd_theory(const RunConfig& config);
void cmd_logz(const RunConfig& config);

/// Parses arguments (argv[0] excluded), dispatches, and maps errors to exit
/// codes: 0 success, 2 configuration error, 3 numerical failure.
int run_cli(const std::vector<std::string>& args);

}  // namespace nrpt
