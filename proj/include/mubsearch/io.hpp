#pragma once

// File formats: experiment configs, BasisSet JSON and trace CSVs.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mubsearch/objective.hpp"
#include "mubsearch/optim.hpp"
#include "mubsearch/search.hpp"

namespace mub {

/// Malformed or schema-violating input file.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Missing, unreadable or unwritable file or directory.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// %.17g, which round-trips every finite double.
std::string format_double(double v);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

// ---- experiment configuration ------------------------------------------

struct ExperimentConfig {
  SearchConfig search;
  std::string output_dir;  ///< empty: derived from the environment and (d, m, seed)
};

/// Sets one key. Top-level keys: d, m, optimizer, restarts, seed, gauge_fixed,
/// sampling, threshold, verify_tolerance, workers, output_dir. Optimizer
/// settings use dotted keys, e.g. "annealing.cooling" or
/// "nelder_mead.max_evaluations". Throws FormatError on an unknown key or a
/// value that does not parse.
void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Parses a JSON object whose members are the keys above, either flat
/// ("annealing.cooling": 0.9) or nested ("annealing": {"cooling": 0.9}).
/// Numbers, booleans and strings are all accepted. Validates the result.
ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Nested JSON snapshot with every setting spelled out.
std::string experiment_config_to_json(const ExperimentConfig& cfg);

/// Output directory: cfg.output_dir if set, otherwise
/// $MUBSEARCH_OUTPUT_ROOT (or "runs") / "d<d>_m<m>_seed<seed>".
std::filesystem::path resolve_output_dir(const ExperimentConfig& cfg);

// ---- basis sets ----------------------------------------------------------

/// {"d", "m", "gauge_fixed", "bases": [[[re, im], ...d*d row-major...], ...]}
/// followed by any `extra` members (already-serialized JSON values).
std::string basis_set_to_json(const BasisSet& set,
                              const std::vector<std::pair<std::string, std::string>>& extra = {});

/// Inverse of basis_set_to_json; extra members are ignored. `gauge_fixed`
/// defaults to false. Throws FormatError for schema violations, including a
/// matrix size that disagrees with d.
BasisSet parse_basis_set(const std::string& json_text);
BasisSet load_basis_set(const std::filesystem::path& path);
void save_basis_set(const BasisSet& set, const std::filesystem::path& path);

std::string residual_report_to_json(const ResidualReport& report);
std::string verification_to_json(const Verification& v, const std::vector<std::size_t>& subset);

// ---- traces ----------------------------------------------------------------

inline constexpr const char* kTraceHeader = "step,best_objective,temperature";

/// Append-only trace CSV, flushed after each row so runs can be watched live.
class TraceCsvWriter {
 public:
  explicit TraceCsvWriter(const std::filesystem::path& path);
  void append(const TracePoint& p);

 private:
  std::ofstream out_;
};

std::vector<TracePoint> read_trace_csv(const std::filesystem::path& path);

/// Merged view over the trace files of one run directory.
struct MergedTrace {
  std::vector<std::string> columns;  ///< one per restart, from the file stem
  std::vector<std::uint64_t> steps;
  std::vector<std::vector<double>> values;  ///< [row][restart], carried forward past a trace's end
  std::vector<double> envelope;             ///< per-row minimum across restarts
};

/// Reads every trace_*.csv directly inside `dir` or `dir/traces`, in name order.
/// Throws IoError when there are none.
MergedTrace merge_traces(const std::filesystem::path& dir);

/// Keeps every row while the envelope exceeds 1e-2, then about 20 rows per
/// decade of step; the final row is always kept.
std::vector<std::size_t> downsample_rows(const MergedTrace& merged);

/// CSV: step, one column per restart, and envelope_min when there is more
/// than one restart.
std::string merged_trace_to_csv(const MergedTrace& merged, const std::vector<std::size_t>& rows);

}  // namespace mub
