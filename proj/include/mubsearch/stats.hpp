#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace mub {

/// Per-entry sample means of |U_ij|^2 against the Haar value 1/n.
class MomentAccumulator {
 public:
  explicit MomentAccumulator(std::size_t n);

  template <class Matrix>
  void add(const Matrix& u) {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) push(i * n_ + j, std::norm(u(i, j)));
    ++count_;
  }

  std::size_t n() const noexcept { return n_; }
  std::size_t count() const noexcept { return count_; }
  double mean(std::size_t i, std::size_t j) const;
  double standard_error(std::size_t i, std::size_t j) const;
  /// Largest |mean - 1/n| / standard_error over all entries.
  double max_abs_z() const;
  /// Every entry mean within `sigmas` standard errors of 1/n.
  bool within(double sigmas) const { return max_abs_z() <= sigmas; }

 private:
  void push(std::size_t k, double v);

  std::size_t n_;
  std::size_t count_ = 0;
  std::vector<double> mean_;
  std::vector<double> m2_;
};

struct KsResult {
  double statistic = 0.0;
  double p_value = 0.0;
};

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value
/// (Stephens' small-sample correction). Inputs need not be sorted.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Kolmogorov survival function Q(lambda) = 2 sum (-1)^(k-1) exp(-2 k^2 lambda^2).
double kolmogorov_q(double lambda);

}  // namespace mub
