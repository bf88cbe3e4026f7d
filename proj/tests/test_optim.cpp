#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mubsearch/hurwitz.hpp"
#include "mubsearch/objective.hpp"
#include "mubsearch/optim.hpp"
#include "mubsearch/search.hpp"

using namespace mub;

namespace {

// (x^2 - 1)^2 + 0.3 x: scipy.optimize.minimize_scalar reference values.
constexpr double kGlobalMinX = -1.035579;
constexpr double kGlobalMinF = -0.30542848374355347;
constexpr double kLocalMinF = 0.29414648;

double tilted_double_well(std::span<const double> x) {
  const double t = x[0] * x[0] - 1.0;
  return t * t + 0.3 * x[0];
}

double sphere(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

double rosenbrock(std::span<const double> x) {
  return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
}

bool non_increasing(const std::vector<TracePoint>& trace) {
  for (std::size_t i = 1; i < trace.size(); ++i)
    if (trace[i].best_objective > trace[i - 1].best_objective) return false;
  return true;
}

}  // namespace

TEST_SUITE("optim") {
  TEST_CASE("reference values of the tilted double well") {
    const std::vector<double> g{kGlobalMinX};
    CHECK(tilted_double_well(g) == doctest::Approx(kGlobalMinF).epsilon(1e-9));
    const std::vector<double> l{0.96015};
    CHECK(tilted_double_well(l) == doctest::Approx(kLocalMinF).epsilon(1e-6));
  }

  TEST_CASE("Nelder-Mead minimizes a quadratic") {
    NelderMeadConfig cfg;
    const std::vector<double> x0{1.0, -2.0, 0.5};
    const auto r = nelder_mead(sphere, x0, cfg);
    CHECK(r.f < 1e-10);
    CHECK(r.converged);
    CHECK(non_increasing(r.trace));
  }

  TEST_CASE("Nelder-Mead solves Rosenbrock") {
    NelderMeadConfig cfg;
    cfg.function_tolerance = 1e-16;
    const std::vector<double> x0{-1.2, 1.0};
    const auto r = nelder_mead(rosenbrock, x0, cfg);
    CHECK(r.f < 1e-10);
    CHECK(std::abs(r.x[0] - 1.0) < 1e-4);
    CHECK(std::abs(r.x[1] - 1.0) < 1e-4);
  }

  TEST_CASE("Nelder-Mead never returns worse than the start") {
    NelderMeadConfig cfg;
    cfg.max_evaluations = 20;
    const std::vector<double> x0{3.0, 3.0};
    const auto r = nelder_mead(rosenbrock, x0, cfg);
    CHECK(r.f <= rosenbrock(x0));
    CHECK(r.evaluations <= 20);
    CHECK(r.budget_exhausted);
  }

  TEST_CASE("Nelder-Mead finds a qubit MU pair within 5000 evaluations") {
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      RandomStream rng(seed);
      ObjectiveEvaluator f(2, 2, true);
      const auto x0 = sample_start(2, 1, rng, SamplingMode::haar);
      NelderMeadConfig cfg;
      cfg.max_evaluations = 5000;
      cfg.target = 1e-10;
      cfg.function_tolerance = 0.0;
      cfg.max_restarts = 20;
      const auto r = nelder_mead([&](std::span<const double> x) { return f(x); }, x0, cfg);
      if (r.f < 1e-10 && r.evaluations <= 5000) ++hits;
    }
    CHECK(hits >= 9);
  }

  TEST_CASE("config validation") {
    NelderMeadConfig nm;
    nm.expansion = 0.5;
    CHECK_THROWS_AS(nm.validate(), std::invalid_argument);
    AnnealingConfig sa;
    sa.cooling = 1.0;
    CHECK_THROWS_AS(sa.validate(), std::invalid_argument);
    sa.cooling = 0.9;
    sa.configurations_per_step = 0;
    CHECK_THROWS_AS(sa.validate(), std::invalid_argument);
  }

  TEST_CASE("annealing requires a positive temperature") {
    AnnealingConfig cfg;
    RandomStream rng(1);
    const std::vector<double> x0{1.0};
    CHECK_THROWS_AS(simulated_annealing(sphere, x0, cfg, rng), std::invalid_argument);
  }

  TEST_CASE("annealing minimizes a quadratic") {
    AnnealingConfig cfg;
    cfg.initial_temperature = 10.0;
    cfg.configurations_per_step = 500;
    cfg.target = 1e-8;
    cfg.max_evaluations = 2'000'000;
    RandomStream rng(2);
    const std::vector<double> x0{2.0, -1.0, 1.5, 0.5};
    const auto r = simulated_annealing(sphere, x0, cfg, rng);
    CHECK(r.f < 1e-6);
    CHECK(non_increasing(r.trace));
    REQUIRE(r.trace.size() >= 2);
    CHECK(r.trace[1].temperature <= cfg.initial_temperature);
  }

  TEST_CASE("annealing escapes the local well") {
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      AnnealingConfig cfg;
      cfg.initial_temperature = 1.0;
      cfg.configurations_per_step = 200;
      cfg.target = -std::numeric_limits<double>::infinity();
      cfg.stop_temperature_ratio = 1e-6;
      cfg.max_subset = 1;
      RandomStream rng(seed);
      const std::vector<double> x0{0.96015};
      const auto r = simulated_annealing(tilted_double_well, x0, cfg, rng);
      if (std::abs(r.f - kGlobalMinF) < 1e-3 && r.x[0] < 0) ++hits;
    }
    CHECK(hits >= 8);
  }

  TEST_CASE("annealing is reproducible") {
    AnnealingConfig cfg;
    cfg.initial_temperature = 1.0;
    cfg.configurations_per_step = 100;
    cfg.max_evaluations = 20000;
    RandomStream a(5), b(5);
    const std::vector<double> x0{-1.0, 2.0};
    const auto r1 = simulated_annealing(rosenbrock, x0, cfg, a);
    const auto r2 = simulated_annealing(rosenbrock, x0, cfg, b);
    CHECK(r1.x == r2.x);
    CHECK(r1.f == r2.f);
    CHECK(r1.evaluations > 1000);
    CHECK(r1.trace.size() == r2.trace.size());
  }

  TEST_CASE("temperature calibration is the spread of f") {
    RandomStream rng(7);
    const auto sampler = [](RandomStream& r) { return std::vector<double>{r.normal()}; };
    const auto id = [](std::span<const double> x) { return x[0]; };
    CHECK(calibrate_temperature(id, sampler, rng, 20000) == doctest::Approx(1.0).epsilon(0.03));
    const auto flat = [](std::span<const double>) { return 2.0; };
    CHECK(calibrate_temperature(flat, sampler, rng, 10) == 1.0);
  }

  TEST_CASE("annealing alone finds three MU bases in dimension 6") {
    SearchConfig cfg;
    cfg.d = 6;
    cfg.m = 3;
    cfg.optimizer = OptimizerMode::annealing;
    cfg.annealing.max_evaluations = 10'000'000;
    bool found = false;
    for (std::size_t k = 0; k < 5 && !found; ++k) {
      const auto r = run_restart(cfg, k);
      CHECK(r.final_objective <= r.initial_objective);
      found = r.final_objective < 1e-10;
    }
    CHECK(found);
  }
}
