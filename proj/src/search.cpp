#include "mubsearch/search.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace mub {

std::string to_string(OptimizerMode mode) {
  switch (mode) {
    case OptimizerMode::amoeba: return "amoeba";
    case OptimizerMode::annealing: return "annealing";
    case OptimizerMode::both: return "both";
  }
  return "both";
}

OptimizerMode parse_optimizer_mode(const std::string& text) {
  if (text == "amoeba") return OptimizerMode::amoeba;
  if (text == "annealing") return OptimizerMode::annealing;
  if (text == "both") return OptimizerMode::both;
  throw std::invalid_argument("unknown optimizer '" + text + "' (expected amoeba, annealing or both)");
}

std::string to_string(SamplingMode mode) {
  return mode == SamplingMode::haar ? "haar" : "paper-literal-uniform";
}

SamplingMode parse_sampling_mode(const std::string& text) {
  if (text == "haar") return SamplingMode::haar;
  if (text == "paper-literal-uniform") return SamplingMode::paper_literal_uniform;
  throw std::invalid_argument("unknown sampling mode '" + text +
                              "' (expected haar or paper-literal-uniform)");
}

void SearchConfig::validate() const {
  if (d < 2) throw std::invalid_argument("config: d must be at least 2");
  if (m < 2) throw std::invalid_argument("config: m must be at least 2");
  if (restarts < 1) throw std::invalid_argument("config: restarts must be at least 1");
  if (!(threshold > 0.0)) throw std::invalid_argument("config: threshold must be positive");
  if (!(verify_tolerance > 0.0)) throw std::invalid_argument("config: verify_tolerance must be positive");
  nelder_mead.validate();
  annealing.validate();
}

namespace {

constexpr unsigned kRefineRebuilds = 100;

// Runs Nelder-Mead from x and appends its trace, continuing the step axis
// from the last recorded row. The first row of a continuation repeats the
// previous endpoint and is dropped.
void polish(const ObjectiveFn& fn, const NelderMeadConfig& nc, const TraceSink& sink,
            std::vector<double>& x, double& f, std::uint64_t& evaluations,
            std::vector<TracePoint>& trace) {
  const bool continuing = !trace.empty();
  const std::uint64_t step = continuing ? trace.back().step : 0;
  TraceSink forward;
  if (sink) {
    forward = [&sink, step, skip = continuing](const TracePoint& p) mutable {
      if (skip && p.step == step) {
        skip = false;
        return;
      }
      skip = false;
      sink(p);
    };
  }
  auto nm = nelder_mead(fn, x, nc, forward, step);
  auto it = nm.trace.begin();
  if (continuing && it != nm.trace.end() && it->step == step) ++it;
  trace.insert(trace.end(), it, nm.trace.end());
  x = std::move(nm.x);
  f = nm.f;
  evaluations += nm.evaluations;
}

}  // namespace

std::vector<double> sample_start(std::size_t d, std::size_t free_bases, RandomStream& rng,
                                 SamplingMode mode) {
  std::vector<double> x;
  x.reserve(free_bases * angle_count(d));
  for (std::size_t b = 0; b < free_bases; ++b) {
    const auto v = sample_haar_angles(d, rng, mode).to_vector();
    x.insert(x.end(), v.begin(), v.end());
  }
  return x;
}

RestartRecord run_restart(const SearchConfig& cfg, std::size_t index, const TraceSink& sink) {
  const auto started = std::chrono::steady_clock::now();
  RestartRecord rec;
  rec.index = index;
  rec.seed = derive_seed(cfg.seed, index);
  RandomStream rng(rec.seed);

  ObjectiveEvaluator eval(cfg.d, cfg.m, cfg.gauge_fixed);
  const ObjectiveFn fn = [&eval](std::span<const double> x) { return eval(x); };
  const auto x0 = sample_start(cfg.d, eval.free_bases(), rng, cfg.sampling);
  rec.initial_objective = eval(x0);

  std::vector<double> x = x0;
  double f = rec.initial_objective;
  std::uint64_t evaluations = 1;
  std::vector<TracePoint> trace;

  if (cfg.optimizer != OptimizerMode::amoeba) {
    AnnealingConfig ac = cfg.annealing;
    ac.target = cfg.threshold;
    if (!(ac.initial_temperature > 0.0)) {
      const auto sampler = [&](RandomStream& r) {
        return sample_start(cfg.d, eval.free_bases(), r, cfg.sampling);
      };
      ac.initial_temperature = calibrate_temperature(fn, sampler, rng, ac.calibration_samples);
      evaluations += ac.calibration_samples;
    }
    rec.initial_temperature = ac.initial_temperature;
    auto sa = simulated_annealing(fn, x, ac, rng, sink);
    x = std::move(sa.x);
    f = sa.f;
    evaluations += sa.evaluations;
    trace = std::move(sa.trace);
  }
  rec.annealing_objective = f;

  if (cfg.optimizer != OptimizerMode::annealing) {
    NelderMeadConfig nc = cfg.nelder_mead;
    nc.trace_interval = cfg.annealing.configurations_per_step;
    polish(fn, nc, sink, x, f, evaluations, trace);

    // A hit below the threshold can still miss the entry-modulus tolerance:
    // f < tol^2 / d bounds every | |overlap| - 1/sqrt(d) | by tol.
    const double verifiable = cfg.verify_tolerance * cfg.verify_tolerance / static_cast<double>(cfg.d);
    if (f < cfg.threshold && f >= verifiable) {
      nc.target = verifiable;
      nc.function_tolerance = 0.0;
      nc.restart_on_collapse = true;
      nc.max_restarts = kRefineRebuilds;
      polish(fn, nc, sink, x, f, evaluations, trace);
    }
  }

  rec.final_objective = f;
  if (cfg.optimizer == OptimizerMode::amoeba) rec.annealing_objective = f;
  rec.success = f < cfg.threshold;
  rec.evaluations = evaluations;
  rec.x = std::move(x);
  rec.trace = std::move(trace);
  rec.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return rec;
}

SearchResult multistart_search(const SearchConfig& cfg, const SinkFactory& sinks) {
  cfg.validate();
  std::vector<RestartRecord> records(cfg.restarts);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cfg.restarts) return;
      try {
        records[i] = run_restart(cfg, i, sinks ? sinks(i) : TraceSink{});
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = cfg.restarts;
        return;
      }
    }
  };

  std::size_t workers = cfg.workers ? cfg.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, cfg.restarts);
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);

  SearchResult out;
  out.restarts = std::move(records);
  const auto best = std::min_element(out.restarts.begin(), out.restarts.end(),
                                     [](const RestartRecord& a, const RestartRecord& b) {
                                       return a.final_objective < b.final_objective;
                                     });
  out.best_restart = best->index;
  out.best_objective = best->final_objective;
  out.best_x = best->x;
  for (const auto& r : out.restarts) out.success_count += r.success ? 1 : 0;

  ObjectiveEvaluator eval(cfg.d, cfg.m, cfg.gauge_fixed);
  out.best_set = eval.assemble(out.best_x);
  out.report = residual_report(out.best_set);
  out.mu_subset = max_mu_subset(out.best_set, cfg.verify_tolerance);
  return out;
}

}  // namespace mub
