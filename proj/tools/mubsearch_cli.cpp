// mubsearch command-line tool. Talks to the library only through the C API.
//
// Exit status: 0 success (MU set found / verified), 1 completed without
// success, 2 configuration or input error.

#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mubsearch/mubsearch.h"

namespace {

constexpr int kSuccess = 0;
constexpr int kNoSuccess = 1;
constexpr int kUsageError = 2;

struct Deleter {
  void operator()(mub_config* p) const { mub_config_free(p); }
  void operator()(mub_basis_set* p) const { mub_basis_set_free(p); }
  void operator()(mub_verification* p) const { mub_verification_free(p); }
  void operator()(mub_search_result* p) const { mub_search_result_free(p); }
  void operator()(char* p) const { mub_string_free(p); }
};
template <class T>
using Handle = std::unique_ptr<T, Deleter>;

int report(const char* context) {
  std::fprintf(stderr, "mubsearch %s: %s\n", context, mub_last_error());
  return kUsageError;
}

void print_owned(char* text) {
  Handle<char> owned(text);
  std::fputs(owned.get(), stdout);
}

struct SearchArgs {
  std::string config;
  std::vector<std::string> sets;
  long long d = -1, m = -1, restarts = -1, workers = -1;
  std::string seed, optimizer, threshold, out;
  bool uniform_phi = false;
  bool ungauged = false;
};

int run_search(const SearchArgs& a) {
  mub_config* raw = nullptr;
  const mub_status st = a.config.empty() ? mub_config_create(&raw) : mub_config_load(a.config.c_str(), &raw);
  if (st != MUB_OK) return report("search");
  Handle<mub_config> cfg(raw);

  std::vector<std::pair<std::string, std::string>> overrides;
  for (const auto& kv : a.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "mubsearch search: --set expects key=value, got '%s'\n", kv.c_str());
      return kUsageError;
    }
    overrides.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (a.d >= 0) overrides.emplace_back("d", std::to_string(a.d));
  if (a.m >= 0) overrides.emplace_back("m", std::to_string(a.m));
  if (a.restarts >= 0) overrides.emplace_back("restarts", std::to_string(a.restarts));
  if (a.workers >= 0) overrides.emplace_back("workers", std::to_string(a.workers));
  if (!a.seed.empty()) overrides.emplace_back("seed", a.seed);
  if (!a.optimizer.empty()) overrides.emplace_back("optimizer", a.optimizer);
  if (!a.threshold.empty()) overrides.emplace_back("threshold", a.threshold);
  if (!a.out.empty()) overrides.emplace_back("output_dir", a.out);
  if (a.uniform_phi) overrides.emplace_back("sampling", "paper-literal-uniform");
  if (a.ungauged) overrides.emplace_back("gauge_fixed", "false");
  for (const auto& [k, v] : overrides)
    if (mub_config_set(cfg.get(), k.c_str(), v.c_str()) != MUB_OK) return report("search");

  mub_search_result* result_raw = nullptr;
  if (mub_search_run(cfg.get(), &result_raw) != MUB_OK) return report("search");
  Handle<mub_search_result> result(result_raw);
  char* text = nullptr;
  if (mub_search_describe(result.get(), &text) == MUB_OK) print_owned(text);
  return mub_search_found(result.get()) ? kSuccess : kNoSuccess;
}

int run_verify(const std::string& path, double tol, bool json) {
  mub_basis_set* raw = nullptr;
  if (mub_basis_set_load(path.c_str(), &raw) != MUB_OK) return report("verify");
  Handle<mub_basis_set> set(raw);
  mub_verification* vraw = nullptr;
  if (mub_verify(set.get(), tol, &vraw) != MUB_OK) return report("verify");
  Handle<mub_verification> v(vraw);
  char* text = nullptr;
  const mub_status st = json ? mub_verification_to_json(v.get(), &text)
                             : mub_verification_describe(v.get(), &text);
  if (st != MUB_OK) return report("verify");
  print_owned(text);
  return mub_verification_passed(v.get()) ? kSuccess : kNoSuccess;
}

int run_sample(long long n, long long count, std::string mode, bool uniform_phi,
               unsigned long long seed, const std::string& out, bool stats) {
  if (n < 0 || count < 0) {
    std::fprintf(stderr, "mubsearch sample: n and count must be non-negative\n");
    return kUsageError;
  }
  if (uniform_phi) mode = "paper-literal-uniform";
  mub_sample_stats s{};
  char* text = nullptr;
  if (mub_sample_write(static_cast<size_t>(n), static_cast<size_t>(count), mode.c_str(), seed,
                       out.c_str(), &s, stats ? &text : nullptr) != MUB_OK) {
    return report("sample");
  }
  std::printf("wrote %zu samples to %s\n", s.count, out.c_str());
  if (!stats) return kSuccess;
  print_owned(text);
  return s.within_3_sigma ? kSuccess : kNoSuccess;
}

int run_construct(const std::string& kind, long long d, const std::string& out) {
  if (d < 0) {
    std::fprintf(stderr, "mubsearch construct: d must be non-negative\n");
    return kUsageError;
  }
  mub_basis_set* raw = nullptr;
  if (mub_construct(kind.c_str(), static_cast<size_t>(d), &raw) != MUB_OK) return report("construct");
  Handle<mub_basis_set> set(raw);
  if (mub_basis_set_save(set.get(), out.c_str()) != MUB_OK) return report("construct");
  size_t dd = 0, m = 0;
  mub_basis_set_dims(set.get(), &dd, &m);
  std::printf("wrote %s construction (d=%zu, %zu bases) to %s\n", kind.c_str(), dd, m, out.c_str());
  return kSuccess;
}

int run_trace_export(const std::string& dir, std::string out) {
  if (out.empty()) out = dir + "/trace_export.csv";
  size_t rows = 0;
  const mub_status st = mub_trace_export(dir.c_str(), out.c_str(), &rows);
  if (st == MUB_ERR_IO) {
    std::fprintf(stderr, "mubsearch trace-export: %s\n", mub_last_error());
    return kNoSuccess;
  }
  if (st != MUB_OK) return report("trace-export");
  std::printf("wrote %zu rows to %s\n", rows, out.c_str());
  return kSuccess;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical search for mutually unbiased bases"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(mub_version()));

  SearchArgs sa;
  auto* search = app.add_subcommand("search", "Multistart search for m MU bases in dimension d");
  search->add_option("--config", sa.config, "JSON config file");
  search->add_option("--d", sa.d, "Dimension");
  search->add_option("--m", sa.m, "Number of bases");
  search->add_option("--seed", sa.seed, "Base seed");
  search->add_option("--restarts", sa.restarts, "Independent restarts K");
  search->add_option("--optimizer", sa.optimizer, "amoeba | annealing | both");
  search->add_flag("--paper-literal-uniform", sa.uniform_phi, "Draw initial phi angles uniformly");
  search->add_flag("--no-gauge", sa.ungauged, "Optimize all m bases instead of pinning the first to I");
  search->add_option("--threshold", sa.threshold, "Objective below which a run counts as success");
  search->add_option("--out", sa.out, "Output directory");
  search->add_option("--workers", sa.workers, "Worker threads (0 = all cores)");
  search->add_option("--set", sa.sets, "Override any config key: key=value")->allow_extra_args(false);

  std::string verify_path;
  double verify_tol = 1e-7;
  bool verify_json = false;
  auto* verify = app.add_subcommand("verify", "Check a basis-set file for mutual unbiasedness");
  verify->add_option("file", verify_path, "Basis-set JSON file")->required();
  verify->add_option("--tol", verify_tol, "Tolerance on overlap moduli and unitarity");
  verify->add_flag("--json", verify_json, "Print the report as JSON");

  long long sample_n = -1, sample_count = 1;
  std::string sample_mode = "haar", sample_out;
  unsigned long long sample_seed = 1;
  bool sample_literal = false, sample_stats = false;
  auto* sample = app.add_subcommand("sample", "Write Haar-random unitaries with their angles");
  sample->add_option("--n", sample_n, "Matrix dimension")->required();
  sample->add_option("--count", sample_count, "Number of samples");
  sample->add_option("--mode", sample_mode, "haar | paper-literal-uniform | qr");
  sample->add_flag("--paper-literal-uniform", sample_literal, "Shorthand for --mode paper-literal-uniform");
  sample->add_option("--seed", sample_seed, "Seed");
  sample->add_option("--out", sample_out, "Output JSON-lines file")->required();
  sample->add_flag("--stats", sample_stats, "Print the |U_ij|^2 moment test");

  std::string construct_kind, construct_out;
  long long construct_d = -1;
  auto* construct = app.add_subcommand("construct", "Export a closed-form basis set");
  construct->add_option("kind", construct_kind, "prime | fourier | identity")->required();
  construct->add_option("--d", construct_d, "Dimension")->required();
  construct->add_option("--out", construct_out, "Output JSON file")->required();

  std::string trace_dir, trace_out;
  auto* trace = app.add_subcommand("trace-export", "Merge and downsample a run's trace CSVs");
  trace->add_option("run_dir", trace_dir, "Run directory")->required();
  trace->add_option("--out", trace_out, "Output CSV (default RUN_DIR/trace_export.csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  if (*search) return run_search(sa);
  if (*verify) return run_verify(verify_path, verify_tol, verify_json);
  if (*sample) {
    return run_sample(sample_n, sample_count, sample_mode, sample_literal, sample_seed, sample_out,
                      sample_stats);
  }
  if (*construct) return run_construct(construct_kind, construct_d, construct_out);
  if (*trace) return run_trace_export(trace_dir, trace_out);
  return kUsageError;
}
