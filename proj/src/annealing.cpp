#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mubsearch/optim.hpp"

namespace mub {

void AnnealingConfig::validate() const {
  if (!(cooling > 0.0 && cooling < 1.0)) throw std::invalid_argument("annealing: cooling must lie in (0, 1)");
  if (configurations_per_step < 1) {
    throw std::invalid_argument("annealing: configurations_per_step must be at least 1");
  }
  if (!(step_size > 0.0)) throw std::invalid_argument("annealing: step_size must be positive");
  if (temperature_exponent < 0.0) throw std::invalid_argument("annealing: temperature_exponent must be >= 0");
  if (max_subset < 1) throw std::invalid_argument("annealing: max_subset must be at least 1");
  if (!(stop_temperature_ratio > 0.0 && stop_temperature_ratio < 1.0)) {
    throw std::invalid_argument("annealing: stop_temperature_ratio must lie in (0, 1)");
  }
  if (max_evaluations == 0) throw std::invalid_argument("annealing: max_evaluations must be positive");
}

OptimResult simulated_annealing(const ObjectiveFn& f, std::span<const double> x0,
                                const AnnealingConfig& cfg, RandomStream& rng,
                                const TraceSink& sink) {
  cfg.validate();
  if (!(cfg.initial_temperature > 0.0)) {
    throw std::invalid_argument("annealing: initial_temperature must be positive (calibrate first)");
  }
  for (double v : x0)
    if (!std::isfinite(v)) throw std::invalid_argument("annealing: x0 must be finite");

  const std::size_t n = x0.size();
  const double t0 = cfg.initial_temperature;
  OptimResult res;
  auto emit = [&](std::uint64_t step, double temperature) {
    TracePoint p{step, res.f, temperature};
    res.trace.push_back(p);
    if (sink) sink(p);
  };

  std::vector<double> current(x0.begin(), x0.end());
  double f_current = f(current);
  ++res.evaluations;
  res.x = current;
  res.f = f_current;
  emit(0, t0);
  if (n == 0 || res.f < cfg.target) {
    res.reached_target = res.f < cfg.target;
    res.converged = true;
    return res;
  }

  std::vector<double> trial = current;
  std::vector<std::size_t> moved;
  const std::size_t subset_cap = std::min(cfg.max_subset, n);
  double temperature = t0;
  std::uint64_t step = 0;

  while (true) {
    const double sigma = cfg.step_size * std::pow(temperature / t0, cfg.temperature_exponent);
    for (std::uint64_t c = 0; c < cfg.configurations_per_step; ++c) {
      // Pick 1..subset_cap distinct coordinates and perturb them.
      const std::size_t count = 1 + rng.below(subset_cap);
      moved.clear();
      while (moved.size() < count) {
        const std::size_t k = rng.below(n);
        if (std::find(moved.begin(), moved.end(), k) == moved.end()) moved.push_back(k);
      }
      for (std::size_t k : moved) trial[k] = current[k] + sigma * rng.normal();

      const double f_trial = f(trial);
      ++res.evaluations;
      const double delta = f_trial - f_current;
      const bool accept = delta < 0.0 || rng.uniform01() < std::exp(-delta / temperature);
      if (accept && std::isfinite(f_trial)) {
        for (std::size_t k : moved) current[k] = trial[k];
        f_current = f_trial;
        if (f_current < res.f) {
          res.f = f_current;
          res.x = current;
        }
      } else {
        for (std::size_t k : moved) trial[k] = current[k];
      }
      if (res.f < cfg.target || res.evaluations >= cfg.max_evaluations) break;
    }
    ++step;
    emit(step, temperature);

    if (res.f < cfg.target) {
      res.reached_target = true;
      res.converged = true;
      return res;
    }
    if (res.evaluations >= cfg.max_evaluations) {
      res.budget_exhausted = true;
      return res;
    }
    temperature *= cfg.cooling;
    if (temperature < cfg.stop_temperature_ratio * t0) {
      res.converged = true;
      return res;
    }
  }
}

double calibrate_temperature(const ObjectiveFn& f,
                             const std::function<std::vector<double>(RandomStream&)>& sampler,
                             RandomStream& rng, std::size_t samples) {
  if (samples < 2) return 1.0;
  double mean = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double v = f(sampler(rng));
    const double delta = v - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (v - mean);
  }
  const double sd = std::sqrt(m2 / static_cast<double>(samples - 1));
  return (std::isfinite(sd) && sd > 0.0) ? sd : 1.0;
}

}  // namespace mub
