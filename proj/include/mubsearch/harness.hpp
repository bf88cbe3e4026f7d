#pragma once

// Experiment orchestration behind the CLI subcommands.

#include <cstdint>
#include <filesystem>
#include <string>

#include "mubsearch/io.hpp"
#include "mubsearch/search.hpp"
#include "mubsearch/stats.hpp"

namespace mub {

struct SearchRun {
  SearchResult result;
  std::filesystem::path output_dir;
  bool found = false;  ///< best objective below the threshold
};

/// Runs the multistart search and writes, under the resolved output dir:
///   config.json          full settings snapshot
///   traces/trace_NNN.csv per-restart trace, appended while the run is live
///   result.json          best BasisSet with its report and angle vectors
///   summary.json         per-restart outcomes (deterministic for a fixed seed)
///   timing.csv           per-restart wall time
/// Throws IoError if the directory cannot be created or written.
SearchRun run_search_experiment(const ExperimentConfig& cfg);

/// Human-readable outcome. A run that misses the threshold is reported as
/// "no MU set found at this budget".
std::string describe_search(const SearchRun& run, const ExperimentConfig& cfg);

/// Name of the trace file for restart `index` out of `restarts`.
std::string trace_file_name(std::size_t index, std::size_t restarts);

enum class SampleMode { haar, paper_literal_uniform, qr };
/// "haar", "paper-literal-uniform" or "qr"; throws std::invalid_argument otherwise.
SampleMode parse_sample_mode(const std::string& text);

struct SampleOutcome {
  MomentAccumulator moments;
  std::size_t written = 0;
};

/// Writes `count` unitaries as JSON lines {"index", "angles", "matrix"} (no
/// angles in qr mode). Throws std::invalid_argument for n < 2 or count < 1.
SampleOutcome write_samples(std::size_t n, std::size_t count, SampleMode mode, std::uint64_t seed,
                            const std::filesystem::path& path);

std::string describe_moments(const MomentAccumulator& moments);

/// Merges and downsamples the traces of a run directory into one CSV file.
/// Returns the number of data rows. Throws IoError when there are no traces.
std::size_t export_traces(const std::filesystem::path& run_dir, const std::filesystem::path& out);

}  // namespace mub
