#pragma once

#include <cstddef>

#include "mubsearch/matrix.hpp"
#include "mubsearch/objective.hpp"

namespace mub {

/// F_lm = exp(2 pi i l m / d) / sqrt(d), 0-based indices.
ComplexMatrix fourier_matrix(std::size_t d);

ComplexMatrix identity_basis(std::size_t d);

bool is_prime(std::size_t n) noexcept;

/// Complete set of d + 1 MU bases for prime d: the computational basis, then
/// for odd d the bases b = 0..d-1 with components omega^(b l^2 + k l) / sqrt(d)
/// (l row, k column), and for d = 2 the X and Y eigenbases.
/// Throws std::invalid_argument when d is not prime.
BasisSet prime_mub_set(std::size_t d);

}  // namespace mub
