#include "nrpt/exploration.hpp"

#include <cmath>
#include <exception>
#include <sstream>
#include <utility>
#include <vector>

#include "nrpt/errors.hpp"

namespace nrpt {

State reference_sample(const TemperedModel& model, RandomStream& rng) {
  if (!model.has_exact_reference()) {
    throw ConfigError("model '" + model.name() +
                      "' has no exact reference sampler; request an MCMC kernel at beta = 0");
  }
  return model.sample_reference(rng);
}

bool rwmh_step(State& x, double beta, const TemperedModel& model, double step_size,
               RandomStream& rng) {
  const double current = model.tempered_potential(x, beta);
  if (!std::isfinite(current)) {
    throw NumericalError("rwmh: non-finite log-density at the current state");
  }
  State proposal = x;
  for (double& v : proposal) {
    v += step_size * rng.normal();
  }
  const double proposed = model.tempered_potential(proposal, beta);
  const double log_ratio = current - proposed;
  if (std::isnan(proposed)) {
    return false;
  }
  if (log_ratio >= 0.0 || std::log(rng.uniform_open()) < log_ratio) {
    x = std::move(proposal);
    return true;
  }
  return false;
}

namespace {

class SliceTarget {
 public:
  SliceTarget(State& x, std::size_t coordinate, double beta, const TemperedModel& model)
      : x_(x), coordinate_(coordinate), beta_(beta), model_(model) {}

  double log_density(double value) const {
    const double saved = x_[coordinate_];
    x_[coordinate_] = value;
    const double v = model_.tempered_potential(x_, beta_);
    x_[coordinate_] = saved;
    return std::isnan(v) ? -INFINITY : -v;
  }

 private:
  State& x_;
  std::size_t coordinate_;
  double beta_;
  const TemperedModel& model_;
};

// Accepts x1 if it could also have generated the doubled bracket from x0.
bool doubling_acceptable(const SliceTarget& f, double x0, double x1, double level, double left,
                         double right, double width) {
  bool differ = false;
  while (right - left > 1.1 * width) {
    const double mid = 0.5 * (left + right);
    if ((x0 < mid && x1 >= mid) || (x0 >= mid && x1 < mid)) {
      differ = true;
    }
    if (x1 < mid) {
      right = mid;
    } else {
      left = mid;
    }
    if (differ && level >= f.log_density(left) && level >= f.log_density(right)) {
      return false;
    }
  }
  return true;
}

}  // namespace

void slice_sample_step(State& x, std::size_t coordinate, double beta, const TemperedModel& model,
                       double width, int max_doublings, RandomStream& rng) {
  SliceTarget f(x, coordinate, beta, model);
  const double x0 = x[coordinate];
  const double current = f.log_density(x0);
  if (!std::isfinite(current)) {
    throw NumericalError("slice: non-finite log-density at the current state");
  }
  const double level = current - rng.exponential(1.0);

  double left = x0 - width * rng.uniform();
  double right = left + width;
  int k = max_doublings;
  while (k > 0 && (level < f.log_density(left) || level < f.log_density(right))) {
    if (rng.uniform() < 0.5) {
      left -= right - left;
    } else {
      right += right - left;
    }
    --k;
  }
  // One end may still sit inside the slice after max_doublings; the
  // acceptability test keeps that update exact. Both ends inside means the
  // slice is wider than the whole budget, which is treated as a failure.
  if (level < f.log_density(left) && level < f.log_density(right)) {
    std::ostringstream msg;
    msg << "slice: failed to bracket the slice after " << max_doublings
        << " doublings (coordinate " << coordinate << ", beta " << beta << ", x " << x0
        << ", interval [" << left << ", " << right << "])";
    throw NumericalError(msg.str());
  }

  double lo = left;
  double hi = right;
  for (int iter = 0; iter < 10000; ++iter) {
    const double x1 = lo + rng.uniform() * (hi - lo);
    if (level < f.log_density(x1) &&
        doubling_acceptable(f, x0, x1, level, left, right, width)) {
      x[coordinate] = x1;
      return;
    }
    if (x1 < x0) {
      lo = x1;
    } else {
      hi = x1;
    }
  }
  throw NumericalError("slice: shrinkage did not terminate");
}

void validate_exploration(const TemperedModel& model, const ExplorationSpec& spec) {
  if (spec.n_expl < 1) {
    throw ConfigError("n_expl must be at least 1");
  }
  switch (spec.kind) {
    case ExplorationKind::kExactReference:
      if (!model.has_exact_reference() || !model.has_exact_tempered_sampler()) {
        throw ConfigError("model '" + model.name() +
                          "' cannot sample its tempered distributions exactly");
      }
      break;
    case ExplorationKind::kRwmh:
      if (!model.is_continuous()) {
        throw ConfigError("rwmh needs a continuous state space");
      }
      if (!(spec.step_size >= 0.0)) {
        throw ConfigError("rwmh step size must be nonnegative");
      }
      break;
    case ExplorationKind::kSlice:
      if (!model.is_continuous()) {
        throw ConfigError("slice sampling needs a continuous state space");
      }
      if (!(spec.slice_width > 0.0) || spec.slice_max_doublings < 0) {
        throw ConfigError("slice width must be positive and max doublings nonnegative");
      }
      break;
    case ExplorationKind::kModelSpecific:
      if (!model.has_model_specific_step()) {
        throw ConfigError("model '" + model.name() + "' has no model-specific kernel");
      }
      break;
  }
}

void explore_chain(State& x, std::size_t chain, double beta, const TemperedModel& model,
                   const ExplorationSpec& spec, RandomStream& rng) {
  if (chain == 0 && model.has_exact_reference()) {
    x = model.sample_reference(rng);
    return;
  }
  for (int rep = 0; rep < spec.n_expl; ++rep) {
    switch (spec.kind) {
      case ExplorationKind::kExactReference:
        x = chain == 0 ? reference_sample(model, rng) : model.sample_tempered(beta, rng);
        break;
      case ExplorationKind::kRwmh:
        rwmh_step(x, beta, model, spec.step_size, rng);
        break;
      case ExplorationKind::kSlice:
        for (std::size_t c = 0; c < x.size(); ++c) {
          slice_sample_step(x, c, beta, model, spec.slice_width, spec.slice_max_doublings, rng);
        }
        break;
      case ExplorationKind::kModelSpecific:
        model.model_specific_step(x, beta, rng);
        break;
    }
  }
}

void explore_ensemble(ReplicaEnsemble& ensemble, const AnnealingSchedule& schedule,
                      const TemperedModel& model, const ExplorationSpec& spec,
                      const StreamKey& key, int threads) {
  const auto n = static_cast<long>(ensemble.size());
  const StreamKey scan_key = key.child(Purpose::kExplore, ensemble.scan_count);
  // Exceptions cannot cross an OpenMP region; keep the first one per chain.
  std::vector<std::exception_ptr> errors(ensemble.size());
#pragma omp parallel for schedule(static) num_threads(threads > 0 ? threads : 1)
  for (long i = 0; i < n; ++i) {
    const auto chain = static_cast<std::size_t>(i);
    try {
      RandomStream rng = scan_key.child(chain).stream();
      explore_chain(ensemble.states[chain], chain, schedule[chain], model, spec, rng);
      ensemble.energies[chain] = model.potential(ensemble.states[chain]);
    } catch (...) {
      errors[chain] = std::current_exception();
    }
  }
  for (const auto& error : errors) {
    if (error) {
      std::rethrow_exception(error);
    }
  }
}

}  // namespace nrpt
