#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mubsearch/optim.hpp"

namespace mub {

void NelderMeadConfig::validate() const {
  if (!(reflection > 0 && expansion > 0 && contraction > 0 && shrink > 0)) {
    throw std::invalid_argument("nelder_mead: coefficients must be positive");
  }
  if (!(expansion > reflection)) {
    throw std::invalid_argument("nelder_mead: expansion must exceed reflection");
  }
  if (!(contraction < 1 && shrink < 1)) {
    throw std::invalid_argument("nelder_mead: contraction and shrink must be below 1");
  }
  if (!(initial_edge > 0)) throw std::invalid_argument("nelder_mead: initial_edge must be positive");
  if (max_evaluations == 0) throw std::invalid_argument("nelder_mead: max_evaluations must be positive");
  if (trace_interval == 0) throw std::invalid_argument("nelder_mead: trace_interval must be positive");
}

namespace {

class Amoeba {
 public:
  Amoeba(const ObjectiveFn& f, const NelderMeadConfig& cfg, const TraceSink& sink,
         std::uint64_t step_offset, std::size_t n)
      : f_(f), cfg_(cfg), sink_(sink), step_offset_(step_offset), n_(n) {}

  OptimResult run(std::span<const double> x0) {
    best_x_.assign(x0.begin(), x0.end());
    best_f_ = evaluate(best_x_);
    emit(step_offset_);
    if (n_ == 0 || best_f_ < cfg_.target) return finish(best_f_ < cfg_.target, true);

    build_simplex(best_x_, best_f_);
    unsigned restarts = 0;
    while (true) {
      if (best_f_ < cfg_.target) return finish(true, true);
      if (evals_ >= cfg_.max_evaluations) return finish(false, false);

      order();
      const bool flat = fv_[worst_] - fv_[best_] < cfg_.function_tolerance;
      const bool collapsed = simplex_extent() < cfg_.collapse_tolerance;
      if (flat || collapsed) {
        if (cfg_.restart_on_collapse && restarts < cfg_.max_restarts) {
          ++restarts;
          const std::vector<double> anchor = simplex_[best_];
          build_simplex(anchor, fv_[best_]);
          continue;
        }
        return finish(false, true);
      }
      iterate();
    }
  }

 private:
  double evaluate(std::span<const double> x) {
    const double v = f_(x);
    ++evals_;
    const double fx = std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
    if (fx < best_f_) {
      best_f_ = fx;
      best_x_.assign(x.begin(), x.end());
    }
    if (evals_ % cfg_.trace_interval == 0) emit(step_offset_ + evals_ / cfg_.trace_interval);
    return fx;
  }

  void emit(std::uint64_t step) {
    TracePoint p{step, best_f_, 0.0};
    trace_.push_back(p);
    if (sink_) sink_(p);
  }

  OptimResult finish(bool reached, bool converged) {
    const std::uint64_t last = step_offset_ + (evals_ + cfg_.trace_interval - 1) / cfg_.trace_interval;
    if (trace_.back().step != last || trace_.back().best_objective != best_f_) emit(last);
    OptimResult r;
    r.x = best_x_;
    r.f = best_f_;
    r.evaluations = evals_;
    r.reached_target = reached;
    r.converged = converged;
    r.budget_exhausted = !converged;
    r.trace = std::move(trace_);
    return r;
  }

  void build_simplex(const std::vector<double>& anchor, double f_anchor) {
    simplex_.assign(n_ + 1, anchor);
    fv_.assign(n_ + 1, f_anchor);
    for (std::size_t i = 0; i < n_; ++i) {
      simplex_[i + 1][i] += cfg_.initial_edge;
      fv_[i + 1] = evaluate(simplex_[i + 1]);
    }
    recompute_sum();
  }

  void recompute_sum() {
    sum_.assign(n_, 0.0);
    for (const auto& v : simplex_)
      for (std::size_t k = 0; k < n_; ++k) sum_[k] += v[k];
  }

  void order() {
    best_ = worst_ = 0;
    for (std::size_t i = 1; i <= n_; ++i) {
      if (fv_[i] < fv_[best_]) best_ = i;
      if (fv_[i] > fv_[worst_]) worst_ = i;
    }
    second_ = best_;
    for (std::size_t i = 0; i <= n_; ++i)
      if (i != worst_ && fv_[i] >= fv_[second_]) second_ = i;
  }

  double simplex_extent() const {
    double ext = 0.0;
    for (std::size_t i = 0; i <= n_; ++i) {
      if (i == best_) continue;
      for (std::size_t k = 0; k < n_; ++k)
        ext = std::max(ext, std::abs(simplex_[i][k] - simplex_[best_][k]));
    }
    return ext;
  }

  // Point c + t (c - x_worst), c the centroid of the non-worst vertices.
  std::vector<double> along(double t) const {
    std::vector<double> p(n_);
    const auto& w = simplex_[worst_];
    const double inv = 1.0 / static_cast<double>(n_);
    for (std::size_t k = 0; k < n_; ++k) {
      const double c = (sum_[k] - w[k]) * inv;
      p[k] = c + t * (c - w[k]);
    }
    return p;
  }

  void replace_worst(std::vector<double> p, double fp) {
    for (std::size_t k = 0; k < n_; ++k) sum_[k] += p[k] - simplex_[worst_][k];
    simplex_[worst_] = std::move(p);
    fv_[worst_] = fp;
  }

  void iterate() {
    auto xr = along(cfg_.reflection);
    const double fr = evaluate(xr);
    if (fr < fv_[best_]) {
      auto xe = along(cfg_.reflection * cfg_.expansion);
      const double fe = evaluate(xe);
      if (fe < fr) replace_worst(std::move(xe), fe);
      else replace_worst(std::move(xr), fr);
      return;
    }
    if (fr < fv_[second_]) {
      replace_worst(std::move(xr), fr);
      return;
    }
    if (fr < fv_[worst_]) {
      auto xc = along(cfg_.reflection * cfg_.contraction);
      const double fc = evaluate(xc);
      if (fc <= fr) {
        replace_worst(std::move(xc), fc);
        return;
      }
    } else {
      auto xcc = along(-cfg_.contraction);
      const double fcc = evaluate(xcc);
      if (fcc < fv_[worst_]) {
        replace_worst(std::move(xcc), fcc);
        return;
      }
    }
    shrink();
  }

  void shrink() {
    const std::vector<double> anchor = simplex_[best_];
    for (std::size_t i = 0; i <= n_; ++i) {
      if (i == best_) continue;
      for (std::size_t k = 0; k < n_; ++k)
        simplex_[i][k] = anchor[k] + cfg_.shrink * (simplex_[i][k] - anchor[k]);
      fv_[i] = evaluate(simplex_[i]);
    }
    recompute_sum();
  }

  const ObjectiveFn& f_;
  const NelderMeadConfig& cfg_;
  const TraceSink& sink_;
  std::uint64_t step_offset_;
  std::size_t n_;

  std::vector<std::vector<double>> simplex_;
  std::vector<double> fv_;
  std::vector<double> sum_;
  std::size_t best_ = 0, second_ = 0, worst_ = 0;

  std::vector<double> best_x_;
  double best_f_ = std::numeric_limits<double>::infinity();
  std::uint64_t evals_ = 0;
  std::vector<TracePoint> trace_;
};

}  // namespace

OptimResult nelder_mead(const ObjectiveFn& f, std::span<const double> x0,
                        const NelderMeadConfig& cfg, const TraceSink& sink,
                        std::uint64_t step_offset) {
  cfg.validate();
  for (double v : x0)
    if (!std::isfinite(v)) throw std::invalid_argument("nelder_mead: x0 must be finite");
  Amoeba amoeba(f, cfg, sink, step_offset, x0.size());
  return amoeba.run(x0);
}

}  // namespace mub
