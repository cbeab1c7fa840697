#include "nrpt/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "nrpt/errors.hpp"
#include "nrpt/models.hpp"

namespace nrpt {

void validate_ele_spec(const EleChainSpec& spec) {
  if (spec.s.empty()) {
    throw ConfigError("index-process spec needs at least one pair");
  }
  for (std::size_t i = 0; i < spec.s.size(); ++i) {
    if (!(spec.s[i] > 0.0 && spec.s[i] <= 1.0)) {
      throw ConfigError("swap probability of pair " + std::to_string(i) +
                        " must lie in (0, 1]; zero makes round trips impossible");
    }
  }
}

Eigen::MatrixXd ele_index_kernel(const EleChainSpec& spec) {
  validate_ele_spec(spec);
  const std::size_t last = spec.last();
  const auto size = static_cast<Eigen::Index>(2 * (last + 1));
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(size, size);
  for (std::size_t i = 0; i <= last; ++i) {
    for (int eps : {-1, +1}) {
      const auto from = static_cast<Eigen::Index>(lifted_index(i, eps));
      const bool inside = eps > 0 ? i < last : i > 0;
      const double p = inside ? spec.s[eps > 0 ? i : i - 1] : 0.0;
      const std::size_t target = inside ? (eps > 0 ? i + 1 : i - 1) : i;
      if (spec.scheme == Scheme::kSeo) {
        for (int next : {-1, +1}) {
          k(from, static_cast<Eigen::Index>(lifted_index(target, next))) += 0.5 * p;
          k(from, static_cast<Eigen::Index>(lifted_index(i, next))) += 0.5 * (1.0 - p);
        }
      } else {
        k(from, static_cast<Eigen::Index>(lifted_index(target, eps))) += p;
        k(from, static_cast<Eigen::Index>(lifted_index(i, -eps))) += 1.0 - p;
      }
    }
  }
  return k;
}

Eigen::MatrixXd seo_index_marginal(const EleChainSpec& spec) {
  EleChainSpec seo = spec;
  seo.scheme = Scheme::kSeo;
  const Eigen::MatrixXd lifted = ele_index_kernel(seo);
  const auto n = static_cast<Eigen::Index>(spec.last() + 1);
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      for (int eps : {-1, +1}) {
        const auto from = static_cast<Eigen::Index>(lifted_index(static_cast<std::size_t>(i), eps));
        q(i, j) += 0.5 * (lifted(from, 2 * j) + lifted(from, 2 * j + 1));
      }
    }
  }
  return q;
}

double communication_inefficiency(const std::vector<double>& s) {
  double sum = 0.0;
  double compensation = 0.0;
  for (double si : s) {
    const double term = (1.0 - si) / si;
    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term)) {
      compensation += (sum - t) + term;
    } else {
      compensation += (term - t) + sum;
    }
    sum = t;
  }
  return sum + compensation;
}

double expected_round_trip(const EleChainSpec& spec) {
  validate_ele_spec(spec);
  const double n = static_cast<double>(spec.last());
  const double e = communication_inefficiency(spec.s);
  const double base = spec.scheme == Scheme::kDeo ? 2.0 * (n + 1.0) : 2.0 * (n + 1.0) * n;
  return base + 2.0 * (n + 1.0) * e;
}

double round_trip_rate_formula(const EleChainSpec& spec) {
  validate_ele_spec(spec);
  const double n = static_cast<double>(spec.last());
  const double e = communication_inefficiency(spec.s);
  return spec.scheme == Scheme::kDeo ? 1.0 / (2.0 + 2.0 * e) : 1.0 / (2.0 * n + 2.0 * e);
}

EleSimulation simulate_ele_index(const EleChainSpec& spec, std::uint64_t n_scans,
                                 const StreamKey& key) {
  validate_ele_spec(spec);
  if (n_scans == 0) {
    throw ConfigError("index-process simulation needs at least one scan");
  }
  const std::size_t last = spec.last();
  const StreamKey swap_key = key.child(Purpose::kSwap);
  std::vector<std::size_t> identity(last + 1);
  for (std::size_t j = 0; j <= last; ++j) identity[j] = j;

  EleSimulation sim;
  sim.scans = n_scans;
  sim.ledger = RoundTripLedger(last + 1, spec.scheme == Scheme::kDeo);
  IndexProcessState ips = initial_index_process(identity, proposal_parity(spec.scheme, 0, key));
  sim.ledger.tally(ips, 0);

  ScanRecord record;
  record.pairs.resize(last);
  for (std::uint64_t n = 0; n < n_scans; ++n) {
    record.scan = n;
    record.parity = proposal_parity(spec.scheme, n, key);
    for (std::size_t i = 0; i < last; ++i) {
      PairOutcome& out = record.pairs[i];
      out.proposed = is_proposed(i, record.parity);
      out.alpha = spec.s[i];
      out.accepted = swap_key.uniform_at(i, n) < spec.s[i];
      out.swapped = out.proposed && out.accepted;
    }
    advance_index_process(ips, record, proposal_parity(spec.scheme, n + 1, key));
    sim.ledger.tally(ips, n + 1);
  }
  sim.tau = static_cast<double>(sim.ledger.total_trips()) / static_cast<double>(n_scans);
  return sim;
}

SwapEstimates mc_swap_functions(const TemperedModel& model, double beta, double beta_prime,
                                std::size_t n_samples, const StreamKey& key) {
  if (!model.has_exact_tempered_sampler()) {
    throw ConfigError("model '" + model.name() + "' cannot sample pi^(beta) exactly");
  }
  if (n_samples < 2) {
    throw ConfigError("Monte Carlo swap estimates need at least two samples");
  }
  RandomStream rng = key.child(Purpose::kSampling).stream();
  double alpha_sum = 0.0;
  double alpha_sq = 0.0;
  double gap_sum = 0.0;
  double gap_sq = 0.0;
  for (std::size_t n = 0; n < n_samples; ++n) {
    const double v_lo = model.potential(model.sample_tempered(beta, rng));
    const double v_hi = model.potential(model.sample_tempered(beta_prime, rng));
    const double alpha = swap_accept_prob(beta, beta_prime, v_lo, v_hi);
    alpha_sum += alpha;
    alpha_sq += alpha * alpha;
    const double v1 = model.potential(model.sample_tempered(beta, rng));
    const double v2 = model.potential(model.sample_tempered(beta, rng));
    const double gap = 0.5 * std::abs(v1 - v2);
    gap_sum += gap;
    gap_sq += gap * gap;
  }
  const double n = static_cast<double>(n_samples);
  auto se = [n](double sum, double sq) {
    const double mean = sum / n;
    return std::sqrt(std::max(0.0, (sq / n - mean * mean) * n / (n - 1.0)) / n);
  };
  SwapEstimates est;
  est.s_hat = alpha_sum / n;
  est.s_se = se(alpha_sum, alpha_sq);
  est.r_hat = 1.0 - est.s_hat;
  est.r_se = est.s_se;
  est.lambda_mc = gap_sum / n;
  est.lambda_se = se(gap_sum, gap_sq);
  return est;
}

double gaussian_rejection(double beta, double beta_prime, int d, double sigma0, double sigma) {
  if (beta > beta_prime) std::swap(beta, beta_prime);
  if (beta == beta_prime) return 0.0;
  const double c = 0.5 * (1.0 / (sigma * sigma) - 1.0 / (sigma0 * sigma0));
  const double var_lo = std::pow(gaussian_sigma_beta(beta, sigma0, sigma), 2);
  const double var_hi = std::pow(gaussian_sigma_beta(beta_prime, sigma0, sigma), 2);
  const double gap = beta_prime - beta;
  const double ratio = var_lo / var_hi;
  const double a = gap * c * var_hi;  // < 1/2
  const double half_d = 0.5 * d;
  const double tilt = std::pow(1.0 - 2.0 * a, -half_d);
  const double log_norm = -half_d * std::numbers::ln2 - std::lgamma(half_d);

  // Integrate over the radius t of the lower chain, Q1 = t^2.
  auto integrand = [&](double t) {
    if (t <= 0.0) return 0.0;
    const double q = t * t;
    const double threshold = ratio * q;
    const double accept_all = boost::math::gamma_q(half_d, 0.5 * threshold);
    const double partial = tilt * std::exp(-a * threshold) *
                           boost::math::gamma_p(half_d, 0.5 * threshold * (1.0 - 2.0 * a));
    const double density = 2.0 * std::exp(log_norm + (d - 1) * std::log(t) - 0.5 * q);
    return density * (accept_all + partial);
  };
  const double upper = std::sqrt(d + 60.0 * std::sqrt(2.0 * d) + 200.0);
  double error = 0.0;
  const double s = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      integrand, 0.0, upper, 20, 1e-15, &error);
  return 1.0 - s;
}

double PdmpPath::position_at(double t) const {
  double time = 0.0;
  double pos = start_position;
  int vel = start_velocity;
  auto it = std::upper_bound(events.begin(), events.end(), t,
                             [](double value, const PdmpEvent& e) { return value < e.time; });
  if (it != events.begin()) {
    const PdmpEvent& e = *(it - 1);
    time = e.time;
    pos = e.position;
    vel = e.velocity;
  }
  return std::clamp(pos + vel * (t - time), 0.0, 1.0);
}

std::vector<double> PdmpPath::occupation(std::size_t bins) const {
  std::vector<double> out(bins, 0.0);
  const double width = 1.0 / static_cast<double>(bins);
  auto add_segment = [&](double a, double b) {
    if (b < a) std::swap(a, b);
    for (std::size_t k = 0; k < bins; ++k) {
      const double lo = std::max(a, k * width);
      const double hi = std::min(b, (k + 1) * width);
      if (hi > lo) out[k] += hi - lo;
    }
  };
  double time = 0.0;
  double pos = start_position;
  int vel = start_velocity;
  for (const PdmpEvent& e : events) {
    add_segment(pos, pos + vel * (e.time - time));
    time = e.time;
    pos = e.position;
    vel = e.velocity;
  }
  add_segment(pos, pos + vel * (horizon - time));
  return out;
}

std::vector<double> PdmpPath::inter_flip_times() const {
  std::vector<double> out;
  std::optional<double> previous;
  for (const PdmpEvent& e : events) {
    if (!e.flip) continue;
    if (previous) out.push_back(e.time - *previous);
    previous = e.time;
  }
  return out;
}

std::vector<double> PdmpPath::round_trip_times() const {
  std::vector<double> out;
  std::optional<double> start;
  bool seeking_down = true;
  for (const PdmpEvent& e : events) {
    if (e.flip) continue;
    if (e.position == 0.0 && seeking_down) {
      if (start) out.push_back(e.time - *start);
      start = e.time;
      seeking_down = false;
    } else if (e.position == 1.0 && !seeking_down && start) {
      seeking_down = true;
    }
  }
  return out;
}

PdmpPath simulate_pdmp(const std::function<double(double)>& rate_fn, double rate_bound,
                       double horizon, const StreamKey& key, double start_position,
                       int start_velocity) {
  if (!std::isfinite(rate_bound) || rate_bound < 0.0) {
    throw ConfigError("PDMP rate bound must be finite and nonnegative");
  }
  PdmpPath path;
  path.horizon = horizon;
  path.start_position = start_position;
  path.start_velocity = start_velocity;
  RandomStream rng = key.child(Purpose::kSimulation).stream();
  double t = 0.0;
  double w = start_position;
  int eps = start_velocity;
  while (true) {
    const double to_boundary = eps > 0 ? 1.0 - w : w;
    const double candidate =
        rate_bound > 0.0 ? rng.exponential(rate_bound) : std::numeric_limits<double>::infinity();
    if (t + std::min(candidate, to_boundary) > horizon) {
      break;
    }
    if (candidate < to_boundary) {
      t += candidate;
      w += eps * candidate;
      const double rate = rate_fn(w);
      if (rate < 0.0 || rate > rate_bound * (1.0 + 1e-12)) {
        throw ConfigError("PDMP rate " + std::to_string(rate) + " outside [0, bound]");
      }
      if (rng.uniform() * rate_bound < rate) {
        eps = -eps;
        path.events.push_back({t, w, eps, true});
      }
    } else {
      t += to_boundary;
      w = eps > 0 ? 1.0 : 0.0;
      eps = -eps;
      path.events.push_back({t, w, eps, false});
    }
  }
  return path;
}

namespace {

double reflect_unit(double w) {
  while (w < 0.0 || w > 1.0) {
    w = w < 0.0 ? -w : 2.0 - w;
  }
  return w;
}

}  // namespace

std::vector<double> simulate_reflected_bm(double horizon, double dt, const StreamKey& key,
                                          double start) {
  if (!(dt > 0.0) || !(horizon > 0.0)) {
    throw ConfigError("reflected Brownian motion needs dt > 0 and a positive horizon");
  }
  const auto steps = static_cast<std::size_t>(std::ceil(horizon / dt));
  RandomStream rng = key.child(Purpose::kSimulation).stream();
  const double scale = std::sqrt(dt);
  std::vector<double> path;
  path.reserve(steps + 1);
  double w = start;
  path.push_back(w);
  for (std::size_t k = 0; k < steps; ++k) {
    w = reflect_unit(w + scale * rng.normal());
    path.push_back(w);
  }
  return path;
}

double reflected_bm_passage_time(double dt, std::size_t replications, const StreamKey& key) {
  if (!(dt > 0.0) || replications == 0) {
    throw ConfigError("passage time needs dt > 0 and at least one replication");
  }
  RandomStream rng = key.child(Purpose::kSimulation).stream();
  const double scale = std::sqrt(dt);
  double total = 0.0;
  for (std::size_t r = 0; r < replications; ++r) {
    double w = 0.0;
    std::uint64_t steps = 0;
    while (w < 1.0) {
      w += scale * rng.normal();
      if (w < 0.0) w = -w;
      ++steps;
    }
    total += static_cast<double>(steps) * dt;
  }
  return total / static_cast<double>(replications);
}

}  // namespace nrpt
