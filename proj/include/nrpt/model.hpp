#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "nrpt/random.hpp"

namespace nrpt {

/// Every model state is a flat coordinate vector. Spins and discrete labels
/// are stored as doubles so kernels and samplers share one representation.
using State = std::vector<double>;

enum class ExplorationKind { kExactReference, kRwmh, kSlice, kModelSpecific };

/// How each chain is refreshed between communication phases.
struct ExplorationSpec {
  ExplorationKind kind = ExplorationKind::kModelSpecific;
  int n_expl = 1;               // kernel applications per scan
  double step_size = 1.0;       // rwmh proposal scale
  double slice_width = 1.0;     // slice initial bracket width
  int slice_max_doublings = 10;
};

/// Target of the form pi^(beta)(x) proportional to exp(-beta V(x) - V0(x)).
///
/// Potentials are defined up to additive constants. Optional capabilities are
/// advertised through the has_* predicates; calling an unsupported capability
/// throws ConfigError.
class TemperedModel {
 public:
  virtual ~TemperedModel() = default;

  virtual std::string name() const = 0;
  virtual std::size_t dimension() const = 0;
  /// True when coordinates live on the real line (rwmh and slice apply).
  virtual bool is_continuous() const = 0;

  virtual double reference_potential(const State& x) const = 0;
  virtual double potential(const State& x) const = 0;

  double tempered_potential(const State& x, double beta) const {
    return beta * potential(x) + reference_potential(x);
  }

  virtual bool has_exact_reference() const { return false; }
  virtual State sample_reference(RandomStream& rng) const;

  virtual bool has_exact_tempered_sampler() const { return false; }
  virtual State sample_tempered(double beta, RandomStream& rng) const;

  virtual bool has_model_specific_step() const { return false; }
  virtual void model_specific_step(State& x, double beta, RandomStream& rng) const;

  virtual ExplorationSpec default_exploration() const = 0;

  /// Closed forms for lambda(beta), Lambda(beta) and log Z(beta)/Z(0).
  virtual bool has_analytic_barrier() const { return false; }
  virtual double local_barrier(double beta) const;
  virtual double global_barrier(double beta) const;
  virtual double log_partition(double beta) const;
};

/// Models whose state space is small enough to enumerate.
class FiniteStateSpace {
 public:
  virtual ~FiniteStateSpace() = default;
  virtual std::size_t num_states() const = 0;
  virtual State state_of(std::size_t index) const = 0;
  virtual std::size_t index_of(const State& x) const = 0;
};

}  // namespace nrpt
