// Acceptance suite: one PASS/FAIL line per criterion.
//
// Usage: acceptance [--only N[,N...]] [--workdir DIR]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mubsearch/constructions.hpp"
#include "mubsearch/harness.hpp"
#include "mubsearch/hurwitz.hpp"
#include "mubsearch/io.hpp"
#include "mubsearch/objective.hpp"
#include "mubsearch/search.hpp"
#include "mubsearch/stats.hpp"

using namespace mub;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

SearchConfig search_config(std::size_t d, std::size_t m, std::size_t restarts, std::uint64_t seed) {
  SearchConfig cfg;
  cfg.d = d;
  cfg.m = m;
  cfg.restarts = restarts;
  cfg.seed = seed;
  cfg.optimizer = OptimizerMode::both;
  return cfg;
}

Outcome d6_m3_zero() {
  const auto r = multistart_search(search_config(6, 3, 20, 1));
  return {r.best_objective < 1e-10, "best " + sci(r.best_objective) + ", " +
                                        std::to_string(r.success_count) + "/20 restarts below 1e-10"};
}

Outcome d6_m4_floor() {
  Outcome out{true, "best per repetition:"};
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto r = multistart_search(search_config(6, 4, 20, seed));
    out.pass = out.pass && r.best_objective > 1e-3;
    out.detail += " " + sci(r.best_objective);
  }
  return out;
}

Outcome prime_oracle() {
  Outcome out{true, ""};
  for (std::size_t d : {2u, 3u, 5u, 7u}) {
    const auto set = prime_mub_set(d);
    const double f = objective_of_bases(set.bases);
    const bool verified = verify_mub(set, 1e-10).passed;
    const auto subset = max_mu_subset(set, 1e-10);
    const bool all = subset.size() == d + 1;
    out.pass = out.pass && verified && f < 1e-20 && all;
    out.detail += "d=" + std::to_string(d) + " f=" + sci(f) + (verified ? " verified" : " UNVERIFIED") +
                  " subset=" + std::to_string(subset.size()) + "; ";
  }
  return out;
}

Outcome haar_statistics() {
  Outcome out{true, ""};
  for (std::size_t n : {2u, 3u, 6u}) {
    RandomStream rh(1000 + n), rq(2000 + n);
    MomentAccumulator acc(n);
    std::vector<double> a, b;
    for (int i = 0; i < 10000; ++i) {
      const auto u = compose_unitary(sample_haar_angles(n, rh));
      acc.add(u);
      a.push_back(std::norm(u(0, 0)));
      b.push_back(std::norm(qr_haar_sample(n, rq)(0, 0)));
    }
    const auto ks = ks_two_sample(a, b);
    out.pass = out.pass && acc.within(3.0) && ks.p_value > 0.01;
    char buf[96];
    std::snprintf(buf, sizeof buf, "n=%zu max|z|=%.2f KS p=%.3f; ", n, acc.max_abs_z(), ks.p_value);
    out.detail += buf;
  }
  return out;
}

Outcome unitarity() {
  Outcome out{true, ""};
  double worst = 0.0;
  for (std::size_t n = 2; n <= 8; ++n) {
    RandomStream rng(3000 + n);
    for (int i = 0; i < 1000; ++i) {
      const auto a = sample_haar_angles(n, rng);
      out.pass = out.pass && a.size() == n * n && a.to_vector().size() == n * n;
      worst = std::max(worst, unitarity_defect(compose_unitary(a)));
    }
  }
  out.pass = out.pass && worst < 1e-12;
  out.detail = "worst defect " + sci(worst) + " over n=2..8, parameter count n^2";
  return out;
}

Outcome small_cases() {
  const auto a = multistart_search(search_config(2, 3, 5, 1));
  const auto b = multistart_search(search_config(3, 4, 5, 1));
  return {a.best_objective < 1e-10 && b.best_objective < 1e-10,
          "d=2 m=3 best " + sci(a.best_objective) + ", d=3 m=4 best " + sci(b.best_objective)};
}

Outcome identity_pair() {
  double worst = 0.0;
  for (std::size_t d = 2; d <= 10; ++d)
    worst = std::max(worst, std::abs(pair_residual(identity_basis(d), identity_basis(d)) - (d - 1.0)));
  return {worst < 1e-12, "max |f(I,I) - (d-1)| = " + sci(worst) + " for d=2..10"};
}

Outcome reproducibility(const fs::path& workdir) {
  ExperimentConfig cfg;
  cfg.search = search_config(3, 3, 4, 7);
  std::vector<SearchRun> runs;
  for (const char* name : {"repro_a", "repro_b"}) {
    fs::remove_all(workdir / name);
    cfg.output_dir = (workdir / name).string();
    runs.push_back(run_search_experiment(cfg));
  }
  bool same_traces = true;
  for (std::size_t k = 0; k < cfg.search.restarts; ++k) {
    const auto file = fs::path("traces") / trace_file_name(k, cfg.search.restarts);
    same_traces = same_traces && read_text_file(workdir / "repro_a" / file) ==
                                     read_text_file(workdir / "repro_b" / file);
  }
  const bool same_best = runs[0].result.best_objective == runs[1].result.best_objective;
  return {same_best && same_traces, std::string("best ") + sci(runs[0].result.best_objective) +
                                        (same_best ? " identical" : " DIFFERS") +
                                        (same_traces ? ", trace files byte-identical" : ", traces DIFFER")};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  fs::path workdir = fs::temp_directory_path() / "mubsearch_acceptance";
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--only" && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      for (std::string tok; std::getline(ss, tok, ',');) only.insert(std::stoi(tok));
    } else if (arg == "--workdir" && i + 1 < argc) {
      workdir = argv[++i];
    } else {
      std::fprintf(stderr, "usage: acceptance [--only N[,N...]] [--workdir DIR]\n");
      return 2;
    }
  }
  fs::create_directories(workdir);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"d=6 m=3 reaches a zero minimum (K=20, both)", d6_m3_zero},
      {"d=6 m=4 stays above 1e-3 (3 x K=20, both)", d6_m4_floor},
      {"prime constructions verify", prime_oracle},
      {"Haar sampling statistics", haar_statistics},
      {"unitarity of sampled matrices", unitarity},
      {"small-case existence (d=2 m=3, d=3 m=4, K=5)", small_cases},
      {"identity pair closed form", identity_pair},
      {"reproducibility", [&] { return reproducibility(workdir); }},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!only.empty() && !only.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    while (!out.detail.empty() && (out.detail.back() == ' ' || out.detail.back() == ';'))
      out.detail.pop_back();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s  [%d] %s: %s (%.1f s)\n", out.pass ? "PASS" : "FAIL", id,
                criteria[i].first.c_str(), out.detail.c_str(), secs);
    std::fflush(stdout);
    if (!out.pass) ++failed;
  }
  return failed ? 1 : 0;
}
