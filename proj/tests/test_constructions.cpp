#include <doctest.h>

#include <stdexcept>

#include "mubsearch/constructions.hpp"
#include "mubsearch/objective.hpp"

using namespace mub;

TEST_SUITE("constructions") {
  TEST_CASE("primality") {
    CHECK_FALSE(is_prime(0));
    CHECK_FALSE(is_prime(1));
    CHECK(is_prime(2));
    CHECK(is_prime(3));
    CHECK_FALSE(is_prime(4));
    CHECK_FALSE(is_prime(6));
    CHECK(is_prime(11));
    CHECK_FALSE(is_prime(121));
  }

  TEST_CASE("prime dimensions give complete MU sets") {
    for (std::size_t d : {2u, 3u, 5u, 7u, 11u}) {
      CAPTURE(d);
      const auto set = prime_mub_set(d);
      CHECK(set.m == d + 1);
      CHECK(set.gauge_fixed);
      CHECK_NOTHROW(set.validate());
      CHECK(verify_mub(set, 1e-10).passed);
      CHECK(objective_of_bases(set.bases) < 1e-20);
      std::vector<std::size_t> all(d + 1);
      for (std::size_t i = 0; i < all.size(); ++i) all[i] = i + 1;
      CHECK(max_mu_subset(set, 1e-10) == all);
    }
  }

  TEST_CASE("composite dimensions are rejected") {
    CHECK_THROWS_AS(prime_mub_set(6), std::invalid_argument);
    CHECK_THROWS_AS(prime_mub_set(1), std::invalid_argument);
  }

  TEST_CASE("Fourier matrices are unitary and Hadamard") {
    for (std::size_t d = 1; d <= 64; ++d) {
      const auto f = fourier_matrix(d);
      CHECK(unitarity_defect(f) < 1e-12);
      CHECK(is_hadamard_like(f, 1e-12));
    }
  }
}
