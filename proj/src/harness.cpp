#include "mubsearch/harness.hpp"

#include <cstdio>
#include <memory>
#include <sstream>

namespace mub {

namespace fs = std::filesystem;

namespace {

std::string json_array(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + format_double(v[k]);
  return s + "]";
}

std::string index_array(const std::vector<std::size_t>& v) {
  std::string s = "[";
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + std::to_string(v[k]);
  return s + "]";
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create output directory " + dir.string() +
                  (ec ? ": " + ec.message() : std::string()));
  }
}

std::string summary_json(const SearchRun& run, const ExperimentConfig& cfg) {
  const auto& r = run.result;
  const auto& s = cfg.search;
  std::string out = "{\n";
  out += "  \"d\": " + std::to_string(s.d) + ",\n";
  out += "  \"m\": " + std::to_string(s.m) + ",\n";
  out += "  \"optimizer\": \"" + to_string(s.optimizer) + "\",\n";
  out += "  \"seed\": " + std::to_string(s.seed) + ",\n";
  out += "  \"threshold\": " + format_double(s.threshold) + ",\n";
  out += std::string("  \"outcome\": \"") +
         (run.found ? "MU set found" : "no MU set found at this budget") + "\",\n";
  out += "  \"best_objective\": " + format_double(r.best_objective) + ",\n";
  out += "  \"best_restart\": " + std::to_string(r.best_restart) + ",\n";
  out += "  \"success_count\": " + std::to_string(r.success_count) + ",\n";
  out += "  \"max_mu_subset\": " + index_array(r.mu_subset) + ",\n";
  out += "  \"restarts\": [\n";
  for (std::size_t k = 0; k < r.restarts.size(); ++k) {
    const auto& rec = r.restarts[k];
    out += "    {\"index\": " + std::to_string(rec.index) + ", \"seed\": " + std::to_string(rec.seed) +
           ", \"initial_objective\": " + format_double(rec.initial_objective) +
           ", \"initial_temperature\": " + format_double(rec.initial_temperature) +
           ", \"annealing_objective\": " + format_double(rec.annealing_objective) +
           ", \"final_objective\": " + format_double(rec.final_objective) +
           ", \"evaluations\": " + std::to_string(rec.evaluations) +
           ", \"success\": " + (rec.success ? "true" : "false") + "}";
    out += (k + 1 < r.restarts.size()) ? ",\n" : "\n";
  }
  out += "  ]\n}\n";
  return out;
}

}  // namespace

std::string trace_file_name(std::size_t index, std::size_t restarts) {
  std::size_t width = 3;
  for (std::size_t top = restarts > 0 ? restarts - 1 : 0; top >= 1000; top /= 10) ++width;
  std::string digits = std::to_string(index);
  if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
  return "trace_" + digits + ".csv";
}

SearchRun run_search_experiment(const ExperimentConfig& cfg) {
  cfg.search.validate();
  SearchRun run;
  run.output_dir = resolve_output_dir(cfg);
  const fs::path traces = run.output_dir / "traces";
  ensure_directory(traces);
  // Stale traces from an earlier run with more restarts would corrupt trace-export.
  for (const auto& entry : fs::directory_iterator(traces)) {
    const auto name = entry.path().filename().string();
    if (name.starts_with("trace_") && name.ends_with(".csv")) fs::remove(entry.path());
  }
  write_text_file(run.output_dir / "config.json", experiment_config_to_json(cfg));

  // Open every trace file up front so an unwritable directory fails before the search.
  std::vector<std::unique_ptr<TraceCsvWriter>> writers;
  for (std::size_t i = 0; i < cfg.search.restarts; ++i) {
    writers.push_back(std::make_unique<TraceCsvWriter>(traces / trace_file_name(i, cfg.search.restarts)));
  }
  const SinkFactory sinks = [&writers](std::size_t i) -> TraceSink {
    TraceCsvWriter* w = writers[i].get();
    return [w](const TracePoint& p) { w->append(p); };
  };

  run.result = multistart_search(cfg.search, sinks);
  writers.clear();
  run.found = run.result.best_objective < cfg.search.threshold;

  const auto& r = run.result;
  ObjectiveEvaluator eval(cfg.search.d, cfg.search.m, cfg.search.gauge_fixed);
  std::string angles = "[";
  const auto parts = eval.split(r.best_x);
  for (std::size_t k = 0; k < parts.size(); ++k) angles += (k ? ", " : "") + json_array(parts[k]);
  angles += "]";
  const Verification v = verify_mub(r.best_set, cfg.search.verify_tolerance);
  write_text_file(run.output_dir / "result.json",
                  basis_set_to_json(r.best_set, {{"objective", format_double(r.best_objective)},
                                                 {"angles", angles},
                                                 {"verification", verification_to_json(v, r.mu_subset)}}));
  write_text_file(run.output_dir / "summary.json", summary_json(run, cfg));

  std::string timing = "restart,wall_seconds\n";
  for (const auto& rec : r.restarts) timing += std::to_string(rec.index) + "," + format_double(rec.wall_seconds) + "\n";
  write_text_file(run.output_dir / "timing.csv", timing);
  return run;
}

std::string describe_search(const SearchRun& run, const ExperimentConfig& cfg) {
  const auto& r = run.result;
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "d=%zu m=%zu optimizer=%s restarts=%zu seed=%llu\n", cfg.search.d,
                cfg.search.m, to_string(cfg.search.optimizer).c_str(), cfg.search.restarts,
                static_cast<unsigned long long>(cfg.search.seed));
  os << line;
  for (const auto& rec : r.restarts) {
    std::snprintf(line, sizeof line, "  restart %3zu  seed %20llu  final %.6e  evals %10llu%s\n",
                  rec.index, static_cast<unsigned long long>(rec.seed), rec.final_objective,
                  static_cast<unsigned long long>(rec.evaluations), rec.success ? "  *" : "");
    os << line;
  }
  std::snprintf(line, sizeof line, "best objective %.6e (restart %zu), %zu/%zu below %.1e\n",
                r.best_objective, r.best_restart, r.success_count, r.restarts.size(),
                cfg.search.threshold);
  os << line;
  os << "max MU subset of best set: " << index_array(r.mu_subset) << "\n";
  os << (run.found ? "MU set found" : "no MU set found at this budget") << "\n";
  os << "output: " << run.output_dir.string() << "\n";
  return os.str();
}

SampleMode parse_sample_mode(const std::string& text) {
  if (text == "haar") return SampleMode::haar;
  if (text == "paper-literal-uniform") return SampleMode::paper_literal_uniform;
  if (text == "qr") return SampleMode::qr;
  throw std::invalid_argument("unknown sampling mode '" + text +
                              "' (expected haar, paper-literal-uniform or qr)");
}

SampleOutcome write_samples(std::size_t n, std::size_t count, SampleMode mode, std::uint64_t seed,
                            const fs::path& path) {
  if (n < 2) throw std::invalid_argument("sample: n must be at least 2");
  if (count < 1) throw std::invalid_argument("sample: count must be at least 1");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());

  SampleOutcome outcome{MomentAccumulator(n), 0};
  RandomStream rng(seed);
  std::string line;
  for (std::size_t k = 0; k < count; ++k) {
    ComplexMatrix u;
    line = "{\"index\": " + std::to_string(k);
    if (mode == SampleMode::qr) {
      u = qr_haar_sample(n, rng);
    } else {
      const auto angles = sample_haar_angles(
          n, rng, mode == SampleMode::haar ? SamplingMode::haar : SamplingMode::paper_literal_uniform);
      u = compose_unitary(angles);
      line += ", \"angles\": " + json_array(angles.to_vector());
    }
    line += ", \"matrix\": [";
    const auto entries = u.entries();
    for (std::size_t e = 0; e < entries.size(); ++e) {
      line += (e ? ", [" : "[") + format_double(entries[e].real()) + ", " + format_double(entries[e].imag()) + "]";
    }
    line += "]}\n";
    out << line;
    outcome.moments.add(u);
    ++outcome.written;
  }
  if (!out) throw IoError("write failed for " + path.string());
  return outcome;
}

std::string describe_moments(const MomentAccumulator& mom) {
  std::ostringstream os;
  char line[160];
  const std::size_t n = mom.n();
  std::snprintf(line, sizeof line, "mean |U_ij|^2 over %zu samples (expected %.6f):\n", mom.count(),
                1.0 / static_cast<double>(n));
  os << line;
  for (std::size_t i = 0; i < n; ++i) {
    os << "  ";
    for (std::size_t j = 0; j < n; ++j) {
      std::snprintf(line, sizeof line, " %.5f", mom.mean(i, j));
      os << line;
    }
    os << "\n";
  }
  const double z = mom.max_abs_z();
  std::snprintf(line, sizeof line, "max |z| = %.3f -> %s\n", z,
                z <= 3.0 ? "within 3 standard errors" : "OUTSIDE 3 standard errors");
  os << line;
  return os.str();
}

std::size_t export_traces(const fs::path& run_dir, const fs::path& out) {
  const MergedTrace merged = merge_traces(run_dir);
  const auto rows = downsample_rows(merged);
  write_text_file(out, merged_trace_to_csv(merged, rows));
  return rows.size();
}

}  // namespace mub
