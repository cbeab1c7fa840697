#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nrpt/barrier.hpp"
#include "nrpt/errors.hpp"
#include "nrpt/models.hpp"
#include "nrpt/theory.hpp"
#include "support.hpp"

using namespace nrpt;

namespace {

// Composite Simpson rule, used as an independent oracle for integrals.
template <class F>
double simpson(F f, double a, double b, int n = 2000) {
  const double h = (b - a) / n;
  double sum = f(a) + f(b);
  for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return sum * h / 3.0;
}

}  // namespace

TEST_CASE("Gaussian local barrier closed forms") {
  CHECK(gaussian_lambda(0.0, 1, 1.0, 0.5) == doctest::Approx(3.0 / std::numbers::pi).epsilon(1e-12));
  CHECK(gaussian_lambda(1.0, 1, 1.0, 0.5) ==
        doctest::Approx(3.0 / (4.0 * std::numbers::pi)).epsilon(1e-12));
  CHECK(gaussian_lambda(0.0, 2, 1.0, 0.5) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK_THROWS_AS(gaussian_lambda(0.5, 1, 0.5, 1.0), ConfigError);
  CHECK_THROWS_AS(gaussian_lambda(0.5, 0, 1.0, 0.5), ConfigError);
}

TEST_CASE("Gaussian global barrier closed forms") {
  CHECK(gaussian_Lambda(0.0, 3, 1.0, 0.5) == 0.0);
  CHECK(gaussian_Lambda(1.0, 1, 1.0, 0.5) == doctest::Approx(0.441271).epsilon(1e-6));
  const double ratio = gaussian_Lambda(1.0, 256, 1.0, 0.5) / std::sqrt(256.0);
  CHECK(std::abs(ratio / (std::sqrt(2.0 / std::numbers::pi) * std::log(2.0)) - 1.0) < 0.05);
}

TEST_CASE("Gaussian global barrier integrates the local barrier") {
  for (int d : {1, 2, 5, 16}) {
    for (double b : {0.3, 0.8, 1.0}) {
      const double integral = simpson([&](double x) { return gaussian_lambda(x, d, 2.0, 0.7); }, 0.0, b);
      CHECK(gaussian_Lambda(b, d, 2.0, 0.7) == doctest::Approx(integral).epsilon(1e-9));
    }
  }
}

TEST_CASE("Gaussian optimal schedule") {
  CHECK(gaussian_optimal_beta(0, 5, 1.0, 0.5) == 0.0);
  CHECK(gaussian_optimal_beta(5, 5, 1.0, 0.5) == 1.0);
  CHECK(gaussian_optimal_beta(1, 2, 1.0, 0.5) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  // update_schedule on a finely sampled exact barrier reproduces it.
  std::vector<double> betas;
  std::vector<double> values;
  for (int i = 0; i <= 4000; ++i) {
    betas.push_back(i / 4000.0);
    values.push_back(gaussian_Lambda(betas.back(), 1, 1.0, 0.5));
  }
  const AnnealingSchedule s = update_schedule(BarrierEstimate::fit(betas, values), 10);
  for (int k = 0; k <= 10; ++k) {
    CHECK(std::abs(s[k] - gaussian_optimal_beta(k, 10, 1.0, 0.5)) < 1e-6);
  }
}

TEST_CASE("Gaussian log partition function matches numerical integration") {
  const GaussianModel gauss(1, 1.0, 0.5);
  for (double b : {0.25, 1.0}) {
    const double z = simpson([&](double x) { return std::exp(-gauss.tempered_potential({x}, b)); }, -12.0, 12.0);
    const double z0 = simpson([&](double x) { return std::exp(-gauss.reference_potential({x})); }, -12.0, 12.0);
    CHECK(gauss.log_partition(b) == doctest::Approx(std::log(z / z0)).epsilon(1e-9));
  }
  CHECK(gauss.log_partition(1.0) == doctest::Approx(-std::numbers::ln2).epsilon(1e-14));
}

TEST_CASE("discrete model closed forms") {
  CHECK(discrete_lambda(0.0, 2, 3.0) == doctest::Approx(6.0 * std::log(3.0) / 25.0).epsilon(1e-12));
  CHECK(discrete_Lambda(2, 3.0) == doctest::Approx(12.0 / 55.0).epsilon(1e-14));
  CHECK(discrete_Lambda(2, 1.0 + 1e-9) < 1e-9);
  const DiscreteMultimodal toy(2, 3.0);
  CHECK(toy.global_barrier(1.0) == doctest::Approx(12.0 / 55.0).epsilon(1e-14));
  CHECK(toy.global_barrier(0.6) == doctest::Approx(simpson([&](double b) { return discrete_lambda(b, 2, 3.0); }, 0.0, 0.6)).epsilon(1e-10));
}

TEST_CASE("discrete local barrier equals the exhaustive double sum") {
  RandomStream rng = StreamKey(1).stream();
  for (int trial = 0; trial < 30; ++trial) {
    const int k = 1 + static_cast<int>(rng.index(5));
    const double a = 1.0 + 5.0 * rng.uniform();
    const double beta = rng.uniform();
    const DiscreteMultimodal toy(k, a);
    const std::vector<double> p = toy.tempered_probabilities(beta);
    double lam = 0.0;
    for (std::size_t x = 0; x < p.size(); ++x) {
      for (std::size_t y = 0; y < p.size(); ++y) {
        lam += 0.5 * p[x] * p[y] *
               std::abs(toy.potential(toy.state_of(x)) - toy.potential(toy.state_of(y)));
      }
    }
    CHECK(discrete_lambda(beta, k, a) == doctest::Approx(lam).epsilon(1e-12));
    // log Z(beta) / Z(0) by enumeration.
    double z = 0.0;
    double z0 = 0.0;
    for (std::size_t x = 0; x < p.size(); ++x) {
      z += std::exp(-toy.tempered_potential(toy.state_of(x), beta));
      z0 += std::exp(-toy.reference_potential(toy.state_of(x)));
    }
    CHECK(toy.log_partition(beta) == doctest::Approx(std::log(z / z0)).epsilon(1e-12));
  }
}

TEST_CASE("Ising conditional probabilities") {
  State spins(25, -1.0);
  CHECK(ising_conditional_flip_prob(spins, 7, 0.0, 5, 0.0) == 0.5);
  State up(25, 1.0);
  // Site 12 is interior on a 5 x 5 grid: four + neighbours.
  CHECK(ising_conditional_flip_prob(up, 12, 0.4407, 5, 0.0) ==
        doctest::Approx(1.0 / (1.0 + std::exp(-2.0 * 4.0 * 0.4407))).epsilon(1e-14));
  CHECK(ising_conditional_flip_prob(up, 12, 0.4407, 5, 0.0) == doctest::Approx(0.9713).epsilon(1e-4));
  CHECK_THROWS_AS(ising_conditional_flip_prob(up, 25, 0.5, 5, 0.0), ConfigError);
}

TEST_CASE("Ising conditionals agree with the enumerated joint on a 2x2 grid") {
  const IsingModel ising(2, -0.4);
  for (double beta : {0.0, 0.44, 1.3}) {
    for (std::size_t s = 0; s < ising.num_states(); ++s) {
      const State x = ising.state_of(s);
      CHECK(ising.index_of(x) == s);
      for (std::size_t site = 0; site < 4; ++site) {
        State plus = x;
        State minus = x;
        plus[site] = 1.0;
        minus[site] = -1.0;
        const double wp = std::exp(-ising.tempered_potential(plus, beta));
        const double wm = std::exp(-ising.tempered_potential(minus, beta));
        CHECK(ising.conditional_up_probability(x, site, beta) ==
              doctest::Approx(wp / (wp + wm)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("Ising enumeration is limited to small grids") {
  CHECK(IsingModel(4, 0.0).num_states() == 65536);
  CHECK_THROWS_AS(IsingModel(5, 0.0).num_states(), ConfigError);
}

TEST_CASE("Monte Carlo local barrier matches closed forms within 3 standard errors") {
  const GaussianModel gauss(3, 1.0, 0.4);
  const DiscreteMultimodal toy(2, 3.0);
  const ReferenceOnlyModel flat(2);
  for (double beta : {0.0, 0.3, 0.9}) {
    const SwapEstimates g = mc_swap_functions(gauss, beta, beta, 200000, StreamKey(7));
    CHECK(std::abs(g.lambda_mc - gauss.local_barrier(beta)) < 3.0 * g.lambda_se);
    const SwapEstimates t = mc_swap_functions(toy, beta, beta, 200000, StreamKey(8));
    CHECK(std::abs(t.lambda_mc - toy.local_barrier(beta)) < 3.0 * t.lambda_se);
    CHECK(mc_swap_functions(flat, beta, 1.0, 1000, StreamKey(9)).s_hat == 1.0);
  }
}

TEST_CASE("mixture posterior is symmetric under label swap") {
  const GaussianMixturePosterior mix(20, 4.0, 10.0, 7);
  CHECK(mix.data().size() == 20);
  RandomStream rng = StreamKey(10).stream();
  for (int i = 0; i < 200; ++i) {
    const double a = 5.0 * rng.normal();
    const double b = 5.0 * rng.normal();
    CHECK(mix.potential({a, b}) == doctest::Approx(mix.potential({b, a})).epsilon(1e-13));
    CHECK(mix.reference_potential({a, b}) == mix.reference_potential({b, a}));
  }
  // Same seed, same data.
  CHECK(GaussianMixturePosterior(20, 4.0, 10.0, 7).data() == mix.data());
}

TEST_CASE("model parameter validation") {
  CHECK_THROWS_AS(GaussianModel(1, 0.5, 1.0), ConfigError);
  CHECK_THROWS_AS(DiscreteMultimodal(0, 3.0), ConfigError);
  CHECK_THROWS_AS(DiscreteMultimodal(2, 1.0), ConfigError);
  CHECK_THROWS_AS(IsingModel(0, 0.0), ConfigError);
  CHECK_THROWS_AS(ReferenceOnlyModel(0), ConfigError);
}
