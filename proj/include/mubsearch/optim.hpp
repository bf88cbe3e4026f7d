#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "mubsearch/random.hpp"

namespace mub {

using ObjectiveFn = std::function<double(std::span<const double>)>;

/// One row of an optimization trace. `step` is counted in Monte Carlo steps:
/// annealing emits one row per step, Nelder-Mead one row per block of
/// `trace_interval` evaluations. `temperature` is zero outside annealing.
struct TracePoint {
  std::uint64_t step = 0;
  double best_objective = 0.0;
  double temperature = 0.0;
};

using TraceSink = std::function<void(const TracePoint&)>;

struct OptimResult {
  std::vector<double> x;
  double f = std::numeric_limits<double>::infinity();
  std::uint64_t evaluations = 0;
  bool reached_target = false;
  bool converged = false;         ///< stopping rule met before the budget ran out
  bool budget_exhausted = false;
  std::vector<TracePoint> trace;  ///< best_objective is non-increasing
};

struct NelderMeadConfig {
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
  double initial_edge = 0.3;  ///< radians
  std::uint64_t max_evaluations = 2'000'000;
  double function_tolerance = 1e-12;  ///< stop when max f - min f over the simplex falls below
  bool restart_on_collapse = true;
  /// Simplex rebuilds around the best vertex allowed after collapse or
  /// premature convergence (only with restart_on_collapse).
  unsigned max_restarts = 1;
  double collapse_tolerance = 1e-14;  ///< largest vertex distance (inf-norm) from the best vertex
  /// Stop as soon as the best value drops below this.
  double target = -std::numeric_limits<double>::infinity();
  std::uint64_t trace_interval = 15000;

  /// Throws std::invalid_argument on non-positive coefficients or expansion <= reflection.
  void validate() const;
};

struct AnnealingConfig {
  /// T0 in objective units. Non-positive means "calibrate": the search layer
  /// sets it to the standard deviation of f over random starting points.
  double initial_temperature = 0.0;
  double cooling = 0.95;  ///< geometric factor applied after every Monte Carlo step
  std::uint64_t configurations_per_step = 15000;
  double step_size = 0.5;              ///< sigma0, radians
  double temperature_exponent = 0.5;   ///< sigma(T) = sigma0 * (T / T0)^exponent
  std::size_t max_subset = 3;          ///< proposals move 1..max_subset coordinates
  double stop_temperature_ratio = 1e-12;
  std::uint64_t max_evaluations = 3'000'000;
  double target = 1e-10;  ///< early exit once the best value drops below
  std::size_t calibration_samples = 100;

  /// Throws std::invalid_argument unless 0 < cooling < 1, configurations >= 1, etc.
  void validate() const;
};

/// Derivative-free simplex minimization ("amoeba"). f(result.x) <= f(x0).
OptimResult nelder_mead(const ObjectiveFn& f, std::span<const double> x0,
                        const NelderMeadConfig& cfg, const TraceSink& sink = {},
                        std::uint64_t step_offset = 0);

/// Metropolis annealing with geometric cooling. Requires
/// cfg.initial_temperature > 0. The same rng state gives the same trace.
OptimResult simulated_annealing(const ObjectiveFn& f, std::span<const double> x0,
                                const AnnealingConfig& cfg, RandomStream& rng,
                                const TraceSink& sink = {});

/// Sample standard deviation of f over `samples` draws of `sampler`. Returns
/// 1.0 if the spread is zero or non-finite.
double calibrate_temperature(const ObjectiveFn& f,
                             const std::function<std::vector<double>(RandomStream&)>& sampler,
                             RandomStream& rng, std::size_t samples);

}  // namespace mub
