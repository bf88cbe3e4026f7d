#include "mubsearch/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mub {

MomentAccumulator::MomentAccumulator(std::size_t n) : n_(n), mean_(n * n, 0.0), m2_(n * n, 0.0) {
  if (n == 0) throw std::invalid_argument("MomentAccumulator: n must be positive");
}

void MomentAccumulator::push(std::size_t k, double v) {
  // Welford update; count_ is bumped by add() after the whole matrix.
  const double count = static_cast<double>(count_ + 1);
  const double delta = v - mean_[k];
  mean_[k] += delta / count;
  m2_[k] += delta * (v - mean_[k]);
}

double MomentAccumulator::mean(std::size_t i, std::size_t j) const { return mean_[i * n_ + j]; }

double MomentAccumulator::standard_error(std::size_t i, std::size_t j) const {
  if (count_ < 2) return std::numeric_limits<double>::infinity();
  const double var = m2_[i * n_ + j] / static_cast<double>(count_ - 1);
  return std::sqrt(var / static_cast<double>(count_));
}

double MomentAccumulator::max_abs_z() const {
  const double target = 1.0 / static_cast<double>(n_);
  double worst = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      const double se = standard_error(i, j);
      const double dev = std::abs(mean(i, j) - target);
      // n = 1 has zero variance; any deviation then counts as infinite.
      const double z = se > 0.0 ? dev / se : (dev > 1e-12 ? std::numeric_limits<double>::infinity() : 0.0);
      worst = std::max(worst, z);
    }
  }
  return worst;
}

double kolmogorov_q(double lambda) {
  if (lambda < 1e-3) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-16 * std::abs(sum)) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: samples must be non-empty");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double ne = na * nb / (na + nb);
  const double sq = std::sqrt(ne);
  return {d, kolmogorov_q((sq + 0.12 + 0.11 / sq) * d)};
}

}  // namespace mub
