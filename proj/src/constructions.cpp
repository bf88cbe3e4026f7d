#include "mubsearch/constructions.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mub {

ComplexMatrix fourier_matrix(std::size_t d) {
  if (d < 1) throw std::invalid_argument("fourier_matrix: d must be at least 1");
  ComplexMatrix f(d, d);
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t l = 0; l < d; ++l) {
    for (std::size_t m = 0; m < d; ++m) {
      // Reduce l*m mod d first so the phase argument stays small.
      const double frac = static_cast<double>((l * m) % d) / static_cast<double>(d);
      f(l, m) = std::polar(norm, 2.0 * std::numbers::pi * frac);
    }
  }
  return f;
}

ComplexMatrix identity_basis(std::size_t d) {
  if (d < 1) throw std::invalid_argument("identity_basis: d must be at least 1");
  return ComplexMatrix::identity(d);
}

bool is_prime(std::size_t n) noexcept {
  if (n < 2) return false;
  for (std::size_t p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

BasisSet prime_mub_set(std::size_t d) {
  if (!is_prime(d)) {
    throw std::invalid_argument("prime_mub_set: d=" + std::to_string(d) + " is not prime");
  }
  BasisSet set{d, d + 1, true, {identity_basis(d)}};
  if (d == 2) {
    const double h = std::sqrt(0.5);
    set.bases.emplace_back(2, 2, std::vector<Complex>{h, h, h, -h});
    set.bases.emplace_back(2, 2, std::vector<Complex>{h, h, Complex(0, h), Complex(0, -h)});
    return set;
  }
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t b = 0; b < d; ++b) {
    ComplexMatrix basis(d, d);
    for (std::size_t l = 0; l < d; ++l) {
      for (std::size_t k = 0; k < d; ++k) {
        const std::size_t power = (b * l * l + k * l) % d;
        basis(l, k) = std::polar(norm, 2.0 * std::numbers::pi * static_cast<double>(power) /
                                           static_cast<double>(d));
      }
    }
    set.bases.push_back(std::move(basis));
  }
  return set;
}

}  // namespace mub
