#include "mubsearch/io.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

namespace mub {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

// ---- configuration -----------------------------------------------------------

namespace {

std::uint64_t parse_unsigned(const std::string& key, const std::string& text) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
    throw FormatError("config key '" + key + "': expected a non-negative integer, got '" + text + "'");
  }
  errno = 0;
  const unsigned long long v = std::strtoull(text.c_str(), nullptr, 10);
  if (errno == ERANGE) throw FormatError("config key '" + key + "': integer out of range");
  return v;
}

double parse_real(const std::string& key, const std::string& text) {
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE || !std::isfinite(v)) {
    throw FormatError("config key '" + key + "': expected a finite number, got '" + text + "'");
  }
  return v;
}

bool parse_flag(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw FormatError("config key '" + key + "': expected true or false, got '" + text + "'");
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;

template <class Field>
Setter unsigned_field(Field field) {
  return [field](ExperimentConfig& c, const std::string& k, const std::string& v) {
    field(c) = static_cast<std::remove_reference_t<decltype(field(c))>>(parse_unsigned(k, v));
  };
}

template <class Field>
Setter real_field(Field field) {
  return [field](ExperimentConfig& c, const std::string& k, const std::string& v) {
    field(c) = parse_real(k, v);
  };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    t["d"] = unsigned_field([](ExperimentConfig& c) -> auto& { return c.search.d; });
    t["m"] = unsigned_field([](ExperimentConfig& c) -> auto& { return c.search.m; });
    t["restarts"] = unsigned_field([](ExperimentConfig& c) -> auto& { return c.search.restarts; });
    t["seed"] = unsigned_field([](ExperimentConfig& c) -> auto& { return c.search.seed; });
    t["workers"] = unsigned_field([](ExperimentConfig& c) -> auto& { return c.search.workers; });
    t["threshold"] = real_field([](ExperimentConfig& c) -> auto& { return c.search.threshold; });
    t["verify_tolerance"] =
        real_field([](ExperimentConfig& c) -> auto& { return c.search.verify_tolerance; });
    t["gauge_fixed"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.search.gauge_fixed = parse_flag(k, v);
    };
    t["optimizer"] = [](ExperimentConfig& c, const std::string&, const std::string& v) {
      try {
        c.search.optimizer = parse_optimizer_mode(v);
      } catch (const std::invalid_argument& e) {
        throw FormatError(e.what());
      }
    };
    t["sampling"] = [](ExperimentConfig& c, const std::string&, const std::string& v) {
      try {
        c.search.sampling = parse_sampling_mode(v);
      } catch (const std::invalid_argument& e) {
        throw FormatError(e.what());
      }
    };
    t["output_dir"] = [](ExperimentConfig& c, const std::string&, const std::string& v) {
      c.output_dir = v;
    };

    t["nelder_mead.reflection"] = real_field([](ExperimentConfig& c) -> auto& { return c.search.nelder_mead.reflection; });
    t["nelder_mead.expansion"] = real_field([](ExperimentConfig& c) -> auto& { return c.search.nelder_mead.expansion; });
    t["nelder_mead.contraction"] = real_field([](ExperimentConfig& c) -> auto& { return c.search.nelder_mead.contraction; });
    t["nelder_mead.shrink"] = real_field([](ExperimentConfig& c) -> auto& { return c.search.nelder_mead.shrink; });
    t["nelder_mead.initial_edge"] = real_field([](ExperimentConfig& c) -> auto& { return c.search.nelder_mead.initial_edge; });
    t["nelder_mead.max_evaluations"] = unsigned_field([](ExperimentConfig& c) -> auto& { return c.search.nelder_mead.max_evaluations; });
    t["nelder_mead.function_tolerance"] = real_field([](ExperimentConfig& c) -> auto& { return c.search.nelder_mead.function_tolerance; });
    t["nelder_mead.collapse_tolerance"] = real_field([](ExperimentConfig& c) -> auto& { return c.search.nelder_mead.collapse_tolerance; });
    t["nelder_mead.max_restarts"] = unsigned_field([](ExperimentConfig& c) -> auto& { return c.search.nelder_mead.max_restarts; });
    t["nelder_mead.restart_on_collapse"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.search.nelder_mead.restart_on_collapse = parse_flag(k, v);
    };

    t["annealing.initial_temperature"] = real_field([](ExperimentConfig& c) -> auto& { return c.search.annealing.initial_temperature; });
    t["annealing.cooling"] = real_field([](ExperimentConfig& c) -> auto& { return c.search.annealing.cooling; });
    t["annealing.configurations_per_step"] = unsigned_field([](ExperimentConfig& c) -> auto& { return c.search.annealing.configurations_per_step; });
    t["annealing.step_size"] = real_field([](ExperimentConfig& c) -> auto& { return c.search.annealing.step_size; });
    t["annealing.temperature_exponent"] = real_field([](ExperimentConfig& c) -> auto& { return c.search.annealing.temperature_exponent; });
    t["annealing.max_subset"] = unsigned_field([](ExperimentConfig& c) -> auto& { return c.search.annealing.max_subset; });
    t["annealing.stop_temperature_ratio"] = real_field([](ExperimentConfig& c) -> auto& { return c.search.annealing.stop_temperature_ratio; });
    t["annealing.max_evaluations"] = unsigned_field([](ExperimentConfig& c) -> auto& { return c.search.annealing.max_evaluations; });
    t["annealing.calibration_samples"] = unsigned_field([](ExperimentConfig& c) -> auto& { return c.search.annealing.calibration_samples; });
    return t;
  }();
  return table;
}

std::string scalar_text(const std::string& key, const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number_float()) return format_double(v.get<double>());
  throw FormatError("config key '" + key + "': expected a scalar value");
}

void flatten(const json& obj, const std::string& prefix, ExperimentConfig& cfg) {
  for (const auto& [k, v] : obj.items()) {
    const std::string key = prefix.empty() ? k : prefix + "." + k;
    if (v.is_object()) flatten(v, key, cfg);
    else set_config_value(cfg, key, scalar_text(key, v));
  }
}

}  // namespace

void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  const auto& table = setters();
  const auto it = table.find(key);
  if (it == table.end()) throw FormatError("unknown config key '" + key + "'");
  it->second(cfg, key, value);
}

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw FormatError("config must be a JSON object");
  ExperimentConfig cfg;
  flatten(doc, "", cfg);
  try {
    cfg.search.validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const fs::path& path) {
  return parse_experiment_config(read_text_file(path));
}

std::string experiment_config_to_json(const ExperimentConfig& cfg) {
  const auto& s = cfg.search;
  const auto& nm = s.nelder_mead;
  const auto& sa = s.annealing;
  json j = {
      {"d", s.d},
      {"m", s.m},
      {"optimizer", to_string(s.optimizer)},
      {"restarts", s.restarts},
      {"seed", s.seed},
      {"gauge_fixed", s.gauge_fixed},
      {"sampling", to_string(s.sampling)},
      {"threshold", s.threshold},
      {"verify_tolerance", s.verify_tolerance},
      {"workers", s.workers},
      {"nelder_mead",
       {{"reflection", nm.reflection},
        {"expansion", nm.expansion},
        {"contraction", nm.contraction},
        {"shrink", nm.shrink},
        {"initial_edge", nm.initial_edge},
        {"max_evaluations", nm.max_evaluations},
        {"function_tolerance", nm.function_tolerance},
        {"collapse_tolerance", nm.collapse_tolerance},
        {"restart_on_collapse", nm.restart_on_collapse},
        {"max_restarts", nm.max_restarts}}},
      {"annealing",
       {{"initial_temperature", sa.initial_temperature},
        {"cooling", sa.cooling},
        {"configurations_per_step", sa.configurations_per_step},
        {"step_size", sa.step_size},
        {"temperature_exponent", sa.temperature_exponent},
        {"max_subset", sa.max_subset},
        {"stop_temperature_ratio", sa.stop_temperature_ratio},
        {"max_evaluations", sa.max_evaluations},
        {"calibration_samples", sa.calibration_samples}}},
  };
  if (!cfg.output_dir.empty()) j["output_dir"] = cfg.output_dir;
  return j.dump(2) + "\n";
}

fs::path resolve_output_dir(const ExperimentConfig& cfg) {
  if (!cfg.output_dir.empty()) return cfg.output_dir;
  const char* root = std::getenv("MUBSEARCH_OUTPUT_ROOT");
  const fs::path base = (root && *root) ? fs::path(root) : fs::path("runs");
  return base / ("d" + std::to_string(cfg.search.d) + "_m" + std::to_string(cfg.search.m) +
                 "_seed" + std::to_string(cfg.search.seed));
}

// ---- basis sets ----------------------------------------------------------------

std::string basis_set_to_json(const BasisSet& set,
                              const std::vector<std::pair<std::string, std::string>>& extra) {
  std::string out = "{\n";
  out += "  \"d\": " + std::to_string(set.d) + ",\n";
  out += "  \"m\": " + std::to_string(set.m) + ",\n";
  out += std::string("  \"gauge_fixed\": ") + (set.gauge_fixed ? "true" : "false") + ",\n";
  out += "  \"bases\": [\n";
  for (std::size_t b = 0; b < set.bases.size(); ++b) {
    out += "    [";
    const auto entries = set.bases[b].entries();
    for (std::size_t k = 0; k < entries.size(); ++k) {
      if (k) out += (k % set.bases[b].cols() == 0) ? ",\n     " : ", ";
      out += "[" + format_double(entries[k].real()) + ", " + format_double(entries[k].imag()) + "]";
    }
    out += (b + 1 < set.bases.size()) ? "],\n" : "]\n";
  }
  out += "  ]";
  for (const auto& [key, value] : extra) out += ",\n  \"" + key + "\": " + value;
  out += "\n}\n";
  return out;
}

BasisSet parse_basis_set(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("basis set is not valid JSON: ") + e.what());
  }
  try {
    if (!doc.is_object()) throw FormatError("basis set must be a JSON object");
    for (const char* key : {"d", "m", "bases"})
      if (!doc.contains(key)) throw FormatError(std::string("basis set is missing '") + key + "'");
    if (!doc["d"].is_number_unsigned() || !doc["m"].is_number_unsigned()) {
      throw FormatError("basis set: d and m must be non-negative integers");
    }
    BasisSet set;
    set.d = doc["d"].get<std::size_t>();
    set.m = doc["m"].get<std::size_t>();
    set.gauge_fixed = doc.value("gauge_fixed", false);
    const auto& bases = doc["bases"];
    if (!bases.is_array()) throw FormatError("basis set: 'bases' must be an array");
    for (const auto& basis : bases) {
      if (!basis.is_array()) throw FormatError("basis set: each basis must be an array of [re, im]");
      std::vector<Complex> entries;
      entries.reserve(basis.size());
      for (const auto& z : basis) {
        if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) {
          throw FormatError("basis set: entries must be [re, im] number pairs");
        }
        entries.emplace_back(z[0].get<double>(), z[1].get<double>());
      }
      if (entries.size() != set.d * set.d) {
        throw FormatError("basis set: a basis has " + std::to_string(entries.size()) +
                          " entries, but d=" + std::to_string(set.d) + " needs " +
                          std::to_string(set.d * set.d));
      }
      set.bases.emplace_back(set.d, set.d, std::move(entries));
    }
    set.validate();
    return set;
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  } catch (const json::exception& e) {
    throw FormatError(std::string("basis set: ") + e.what());
  }
}

BasisSet load_basis_set(const fs::path& path) { return parse_basis_set(read_text_file(path)); }

void save_basis_set(const BasisSet& set, const fs::path& path) {
  write_text_file(path, basis_set_to_json(set));
}

std::string residual_report_to_json(const ResidualReport& r) {
  std::string out = "{\"total\": " + format_double(r.total) +
                    ", \"pair_count\": " + std::to_string(r.pair_count) + ", \"per_pair\": [";
  for (std::size_t k = 0; k < r.per_pair.size(); ++k) {
    const auto& p = r.per_pair[k];
    if (k) out += ", ";
    out += "{\"i\": " + std::to_string(p.i) + ", \"j\": " + std::to_string(p.j) +
           ", \"residual\": " + format_double(p.residual) + "}";
  }
  const auto& w = r.worst_entry;
  out += "], \"worst_entry\": {\"pair\": [" + std::to_string(w.basis_i) + ", " +
         std::to_string(w.basis_j) + "], \"entry\": [" + std::to_string(w.row) + ", " +
         std::to_string(w.col) + "], \"value\": " + format_double(w.value) + "}}";
  return out;
}

std::string verification_to_json(const Verification& v, const std::vector<std::size_t>& subset) {
  std::string s = "[";
  for (std::size_t k = 0; k < subset.size(); ++k) s += (k ? ", " : "") + std::to_string(subset[k]);
  s += "]";
  return std::string("{\"passed\": ") + (v.passed ? "true" : "false") +
         ", \"orthonormal\": " + (v.orthonormal ? "true" : "false") +
         ", \"unbiased\": " + (v.unbiased ? "true" : "false") +
         ", \"worst_unitarity_defect\": " + format_double(v.worst_unitarity_defect) +
         ", \"worst_modulus_deviation\": " + format_double(v.worst_modulus_deviation) +
         ", \"max_mu_subset\": " + s + ", \"report\": " + residual_report_to_json(v.report) + "}";
}

// ---- traces -------------------------------------------------------------------

TraceCsvWriter::TraceCsvWriter(const fs::path& path) : out_(path, std::ios::trunc) {
  if (!out_) throw IoError("cannot write trace " + path.string());
  out_ << kTraceHeader << '\n' << std::flush;
}

void TraceCsvWriter::append(const TracePoint& p) {
  out_ << p.step << ',' << format_double(p.best_objective) << ',' << format_double(p.temperature)
       << '\n'
       << std::flush;
}

std::vector<TracePoint> read_trace_csv(const fs::path& path) {
  std::istringstream in(read_text_file(path));
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader) {
    throw FormatError(path.string() + ": missing trace header '" + kTraceHeader + "'");
  }
  std::vector<TracePoint> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    TracePoint p;
    unsigned long long step = 0;
    if (std::sscanf(line.c_str(), "%llu,%lf,%lf", &step, &p.best_objective, &p.temperature) != 3) {
      throw FormatError(path.string() + ": malformed trace row '" + line + "'");
    }
    p.step = step;
    rows.push_back(p);
  }
  return rows;
}

MergedTrace merge_traces(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const fs::path& root : {dir, dir / "traces"}) {
    std::error_code ec;
    if (!fs::is_directory(root, ec)) continue;
    for (const auto& entry : fs::directory_iterator(root)) {
      const auto name = entry.path().filename().string();
      if (entry.is_regular_file() && name.starts_with("trace_") && name.ends_with(".csv")) {
        files.push_back(entry.path());
      }
    }
  }
  if (files.empty()) throw IoError("no trace_*.csv files under " + dir.string());
  std::sort(files.begin(), files.end());

  MergedTrace merged;
  std::vector<std::vector<TracePoint>> traces;
  for (const auto& f : files) {
    auto rows = read_trace_csv(f);
    if (rows.empty()) continue;
    merged.columns.push_back(f.stem().string());
    traces.push_back(std::move(rows));
  }
  if (traces.empty()) throw IoError("trace files under " + dir.string() + " are empty");

  for (const auto& t : traces)
    for (const auto& p : t) merged.steps.push_back(p.step);
  std::sort(merged.steps.begin(), merged.steps.end());
  merged.steps.erase(std::unique(merged.steps.begin(), merged.steps.end()), merged.steps.end());

  std::vector<std::size_t> cursor(traces.size(), 0);
  for (const auto step : merged.steps) {
    std::vector<double> row(traces.size());
    double env = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < traces.size(); ++c) {
      const auto& t = traces[c];
      while (cursor[c] + 1 < t.size() && t[cursor[c] + 1].step <= step) ++cursor[c];
      row[c] = t[cursor[c]].best_objective;
      env = std::min(env, row[c]);
    }
    merged.values.push_back(std::move(row));
    merged.envelope.push_back(env);
  }
  return merged;
}

std::vector<std::size_t> downsample_rows(const MergedTrace& merged) {
  std::vector<std::size_t> keep;
  long last_bucket = -1;
  for (std::size_t r = 0; r < merged.steps.size(); ++r) {
    const bool last = r + 1 == merged.steps.size();
    if (merged.envelope[r] > 1e-2 || last || merged.steps[r] == 0) {
      keep.push_back(r);
      continue;
    }
    const long bucket = static_cast<long>(std::floor(20.0 * std::log10(static_cast<double>(merged.steps[r]))));
    if (bucket != last_bucket) {
      keep.push_back(r);
      last_bucket = bucket;
    }
  }
  return keep;
}

std::string merged_trace_to_csv(const MergedTrace& merged, const std::vector<std::size_t>& rows) {
  const bool envelope = merged.columns.size() > 1;
  std::string out = "step";
  for (const auto& c : merged.columns) out += "," + c;
  if (envelope) out += ",envelope_min";
  out += "\n";
  for (const auto r : rows) {
    out += std::to_string(merged.steps[r]);
    for (const double v : merged.values[r]) out += "," + format_double(v);
    if (envelope) out += "," + format_double(merged.envelope[r]);
    out += "\n";
  }
  return out;
}

}  // namespace mub
