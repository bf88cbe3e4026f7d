#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mubsearch/hurwitz.hpp"
#include "mubsearch/objective.hpp"
#include "mubsearch/optim.hpp"

namespace mub {

enum class OptimizerMode { amoeba, annealing, both };

std::string to_string(OptimizerMode mode);
/// Accepts "amoeba", "annealing", "both"; throws std::invalid_argument otherwise.
OptimizerMode parse_optimizer_mode(const std::string& text);
std::string to_string(SamplingMode mode);
/// Accepts "haar" and "paper-literal-uniform".
SamplingMode parse_sampling_mode(const std::string& text);

struct SearchConfig {
  std::size_t d = 6;
  std::size_t m = 3;
  OptimizerMode optimizer = OptimizerMode::both;
  std::size_t restarts = 20;
  std::uint64_t seed = 1;
  bool gauge_fixed = true;
  SamplingMode sampling = SamplingMode::haar;
  double threshold = 1e-10;         ///< objective below this counts as an MU set
  double verify_tolerance = 1e-7;   ///< entry-modulus tolerance for reports and subsets
  std::size_t workers = 0;          ///< 0 means one per hardware thread
  NelderMeadConfig nelder_mead;
  AnnealingConfig annealing;

  /// Throws std::invalid_argument unless d >= 2, m >= 2, restarts >= 1 and
  /// both optimizer configs are valid.
  void validate() const;
};

/// Outcome of one independent restart.
struct RestartRecord {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  double initial_objective = 0.0;
  double initial_temperature = 0.0;  ///< 0 when annealing is not used
  double annealing_objective = 0.0;  ///< best after annealing; equals final for amoeba-only
  double final_objective = 0.0;
  std::uint64_t evaluations = 0;
  double wall_seconds = 0.0;
  bool success = false;
  std::vector<double> x;  ///< final flat coordinates
  std::vector<TracePoint> trace;
};

struct SearchResult {
  double best_objective = 0.0;
  std::size_t best_restart = 0;
  std::vector<double> best_x;
  BasisSet best_set;
  ResidualReport report;
  std::vector<std::size_t> mu_subset;
  std::size_t success_count = 0;
  std::vector<RestartRecord> restarts;
};

/// Initial flat coordinates: one Hurwitz draw per free basis.
std::vector<double> sample_start(std::size_t d, std::size_t free_bases, RandomStream& rng,
                                 SamplingMode mode);

/// Runs restart `index` with its own stream derive_seed(cfg.seed, index).
RestartRecord run_restart(const SearchConfig& cfg, std::size_t index, const TraceSink& sink = {});

/// Provides the trace sink for a restart; called once per restart from the
/// worker that runs it.
using SinkFactory = std::function<TraceSink(std::size_t restart_index)>;

/// K independent restarts spread over worker threads. Results do not depend
/// on the worker count.
SearchResult multistart_search(const SearchConfig& cfg, const SinkFactory& sinks = {});

}  // namespace mub
