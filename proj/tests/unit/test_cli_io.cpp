#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nrpt/cli.hpp"
#include "nrpt/io.hpp"
#include "nrpt/random.hpp"

namespace fs = std::filesystem;
using namespace nrpt;

namespace {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    FAIL("missing column " << name);
    return 0;
  }
  double num(std::size_t row, const std::string& name) const {
    return std::stod(rows[row][column(name)]);
  }
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

Table read_csv(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  Table t;
  std::string line;
  std::getline(in, line);
  t.header = split(line);
  while (std::getline(in, line)) t.rows.push_back(split(line));
  return t;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json read_json(const fs::path& path) {
  std::ifstream in(path);
  return nlohmann::json::parse(in);
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "nrpt_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int cli(std::vector<std::string> args, const fs::path& out) {
  args.push_back("--out");
  args.push_back(out.string());
  return run_cli(args);
}

}  // namespace

TEST_CASE("format_real round-trips") {
  RandomStream rng = StreamKey(1).stream();
  for (int i = 0; i < 10000; ++i) {
    const double x = std::ldexp(rng.uniform() - 0.5, static_cast<int>(rng.index(200)) - 100);
    const std::string s = format_real(x);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    CHECK(back == x);
  }
  CHECK(format_real(0.5) == "0.5");
  CHECK(format_real(1.0) == "1");
}

TEST_CASE("read_schedule_file accepts plain lists and round-tagged CSV") {
  const fs::path dir = scratch("schedule");
  {
    std::ofstream f(dir / "plain.txt");
    f << "# uniform\n0\n0.5\n\n1\n";
  }
  CHECK(read_schedule_file(dir / "plain.txt") == std::vector<double>{0.0, 0.5, 1.0});
  {
    std::ofstream f(dir / "rounds.csv");
    f << "round,chain,beta\n1,0,0\n1,1,0.5\n1,2,1\n2,0,0\n2,1,0.25\n2,2,0.75\n2,3,1\n";
  }
  CHECK(read_schedule_file(dir / "rounds.csv") == std::vector<double>{0.0, 0.25, 0.75, 1.0});
  {
    std::ofstream f(dir / "beta_only.csv");
    f << "beta\n0\n0.125\n1\n";
  }
  CHECK(read_schedule_file(dir / "beta_only.csv") == std::vector<double>{0.0, 0.125, 1.0});
}

TEST_CASE("adapt recovers the discrete barrier and writes every artifact") {
  const fs::path out = scratch("adapt_discrete");
  REQUIRE(cli({"adapt", "--model", "discrete", "--cores", "30", "--tune", "16384", "--scans", "2000",
               "--seed", "1"},
              out) == 0);
  for (const char* f : {"schedule.csv", "rejections.csv", "barrier.csv", "summary.json"}) {
    CHECK(fs::exists(out / f));
  }
  const nlohmann::json summary = read_json(out / "summary.json");
  CHECK(std::abs(summary["Lambda_hat"].get<double>() / (12.0 / 55.0) - 1.0) < 0.05);
  const Table barrier = read_csv(out / "barrier.csv");
  CHECK(barrier.rows.size() == 1001);

  // The last round of schedule.csv is the N* schedule and is strictly increasing.
  const std::vector<double> final_schedule = read_schedule_file(out / "schedule.csv");
  CHECK(final_schedule.size() == summary["N_star"].get<std::size_t>() + 1);
  for (std::size_t i = 1; i < final_schedule.size(); ++i) CHECK(final_schedule[i] > final_schedule[i - 1]);

  // Same seed, same bytes.
  const fs::path again = scratch("adapt_discrete_again");
  REQUIRE(cli({"adapt", "--model", "discrete", "--cores", "30", "--tune", "16384", "--scans", "2000",
               "--seed", "1"},
              again) == 0);
  for (const char* f : {"schedule.csv", "rejections.csv", "barrier.csv"}) {
    CHECK(slurp(out / f) == slurp(again / f));
  }
}

TEST_CASE("adapt on a barrier-free model keeps uniform schedules") {
  const fs::path out = scratch("adapt_flat");
  REQUIRE(cli({"adapt", "--model", "flat", "--cores", "6", "--tune", "256", "--scans", "100", "--seed", "2"},
              out) == 0);
  const Table t = read_csv(out / "schedule.csv");
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const double round = t.num(r, "round");
    const double chain = t.num(r, "chain");
    const double beta = t.num(r, "beta");
    // Tuning rounds use 6 intervals; the final round uses N* = 1.
    const double n = round <= 8 ? 6.0 : 1.0;
    CHECK(beta == doctest::Approx(chain / n).epsilon(1e-12));
  }
}

TEST_CASE("rejection-free N=1 trace cycles with period 4") {
  const fs::path out = scratch("trace");
  REQUIRE(cli({"run", "--model", "flat", "--chains", "1", "--scans", "40", "--trace-index", "--seed", "3"},
              out) == 0);
  const Table t = read_csv(out / "index_trace.csv");
  std::vector<std::pair<int, int>> machine0;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    if (t.num(r, "machine") == 0.0) {
      machine0.emplace_back(static_cast<int>(t.num(r, "index")), static_cast<int>(t.num(r, "epsilon")));
    }
  }
  REQUIRE(machine0.size() >= 12);
  for (std::size_t i = 4; i < machine0.size(); ++i) CHECK(machine0[i] == machine0[i - 4]);
  CHECK(machine0[0] != machine0[1]);
  CHECK(machine0[0] != machine0[2]);
  CHECK(machine0[0] != machine0[3]);
}

TEST_CASE("trips.csv rows are ordered and disjoint per machine") {
  const fs::path out = scratch("trips");
  REQUIRE(cli({"run", "--model", "gaussian", "--d", "2", "--chains", "12", "--scans", "20000", "--seed", "4"},
              out) == 0);
  const Table t = read_csv(out / "trips.csv");
  REQUIRE(!t.rows.empty());
  std::map<int, double> last_end;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const int machine = static_cast<int>(t.num(r, "machine"));
    const double start = t.num(r, "start_scan");
    const double end = t.num(r, "end_scan");
    CHECK(start < end);
    if (last_end.count(machine)) CHECK(start >= last_end[machine]);
    last_end[machine] = end;
  }
  const nlohmann::json summary = read_json(out / "summary.json");
  CHECK(summary["round_trips"].get<std::size_t>() == t.rows.size());
  const Table samples = read_csv(out / "samples.csv");
  CHECK(samples.rows.size() == 20000);
  CHECK(samples.header == std::vector<std::string>{"scan", "x0", "x1"});
}

TEST_CASE("DEO completes more than twice the SEO round trips") {
  const fs::path deo = scratch("deo");
  const fs::path seo = scratch("seo");
  const std::vector<std::string> common{"--model", "gaussian", "--chains", "30", "--scans", "100000",
                                        "--explore", "exact_reference", "--seed", "5"};
  std::vector<std::string> a{"run", "--scheme", "deo"};
  std::vector<std::string> b{"run", "--scheme", "seo"};
  a.insert(a.end(), common.begin(), common.end());
  b.insert(b.end(), common.begin(), common.end());
  REQUIRE(cli(a, deo) == 0);
  REQUIRE(cli(b, seo) == 0);
  const double trips_deo = read_json(deo / "summary.json")["round_trips"].get<double>();
  const double trips_seo = read_json(seo / "summary.json")["round_trips"].get<double>();
  CHECK(trips_deo > 2.0 * trips_seo);
}

TEST_CASE("theory output agrees with the closed forms") {
  const fs::path out = scratch("theory");
  REQUIRE(cli({"theory", "--chains", "8", "--s", "0.8", "--scans", "1000000", "--pdmp-rate", "2",
               "--horizon", "60000", "--seed", "6"},
              out) == 0);
  const Table t = read_csv(out / "theory.csv");
  REQUIRE(t.rows.size() == 2);
  for (std::size_t r = 0; r < 2; ++r) {
    CHECK(std::abs(t.num(r, "tau_sim") / t.num(r, "tau_formula") - 1.0) < 0.02);
  }
  CHECK(t.rows[0][t.column("scheme")] == "deo");
  CHECK(t.num(0, "tau_formula") == doctest::Approx(1.0 / 6.0));
  CHECK(t.num(1, "tau_formula") == doctest::Approx(0.05));
  CHECK(t.num(0, "expected_round_trip") == doctest::Approx(54.0));

  const Table pdmp = read_csv(out / "pdmp.csv");
  double last_flip = -1.0;
  double total = 0.0;
  int waits = 0;
  for (std::size_t r = 0; r < pdmp.rows.size(); ++r) {
    if (pdmp.num(r, "flip") != 1.0) continue;
    const double time = pdmp.num(r, "time");
    if (last_flip >= 0.0) {
      total += time - last_flip;
      ++waits;
    }
    last_flip = time;
  }
  REQUIRE(waits > 100000);
  CHECK(std::abs(total / waits / 0.5 - 1.0) < 0.02);

  const fs::path free = scratch("theory_free");
  REQUIRE(cli({"theory", "--s", "1,1,1", "--scans", "1000", "--seed", "6"}, free) == 0);
  const Table f = read_csv(free / "theory.csv");
  CHECK(f.rows[0][f.column("tau_formula")] == "0.5");
  CHECK(f.num(0, "inefficiency") == 0.0);
}

TEST_CASE("logz estimates") {
  const fs::path out = scratch("logz");
  REQUIRE(cli({"logz", "--model", "gaussian", "--cores", "30", "--tune", "4096", "--seed", "7"}, out) == 0);
  const Table t = read_csv(out / "logz.csv");
  CHECK(t.header == std::vector<std::string>{"round", "estimate"});
  REQUIRE(t.rows.size() == 12);
  std::vector<double> z;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    CHECK(t.num(r, "round") == static_cast<double>(r + 1));
    z.push_back(t.num(r, "estimate"));
  }
  CHECK(std::abs(z.back() + std::log(2.0)) < 0.02);
  // Rounds double their scans, so successive estimates settle down.
  CHECK(std::abs(z[9] - z[8]) < std::abs(z[2] - z[1]));

  const fs::path flat = scratch("logz_flat");
  REQUIRE(cli({"logz", "--model", "flat", "--cores", "4", "--tune", "64", "--seed", "7"}, flat) == 0);
  const Table f = read_csv(flat / "logz.csv");
  for (std::size_t r = 0; r < f.rows.size(); ++r) CHECK(std::abs(f.num(r, "estimate")) < 0.005);
}

TEST_CASE("exit codes") {
  const fs::path out = scratch("exit");
  CHECK(cli({"run", "--model", "gaussian"}, out) == 2);                       // missing seed
  CHECK(cli({"run", "--model", "nope", "--seed", "1"}, out) == 2);            // unknown model
  CHECK(cli({"run", "--scheme", "xeo", "--seed", "1"}, out) == 2);            // unknown scheme
  CHECK(cli({"run", "--scans", "0", "--seed", "1"}, out) == 2);               // empty run
  CHECK(cli({"run", "--sigma", "2", "--seed", "1"}, out) == 2);               // sigma > sigma0
  CHECK(cli({"run", "--model", "discrete", "--explore", "rwmh", "--seed", "1"}, out) == 2);
  CHECK(cli({"run", "--bogus-flag", "--seed", "1"}, out) == 2);
  CHECK(cli({"theory", "--s", "0.5,0", "--seed", "1"}, out) == 2);
  // A bracket far narrower than the slice cannot be expanded in 10 doublings.
  CHECK(cli({"run", "--explore", "slice", "--slice-width", "1e-300", "--chains", "2", "--scans", "5",
             "--seed", "1"},
            out) == 3);
}

TEST_CASE("options can come from a config file") {
  const fs::path out = scratch("config");
  {
    std::ofstream f(out / "run.toml");
    f << "model = \"flat\"\nchains = 3\nscans = 50\nseed = 9\n";
  }
  REQUIRE(cli({"run", "--config", (out / "run.toml").string()}, out) == 0);
  const nlohmann::json summary = read_json(out / "summary.json");
  CHECK(summary["N"].get<int>() == 3);
  CHECK(summary["config"]["model"] == "flat");
  CHECK(read_csv(out / "samples.csv").rows.size() == 50);
}
