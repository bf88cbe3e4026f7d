#include <doctest.h>

#include <stdexcept>

#include "mubsearch/hurwitz.hpp"
#include "mubsearch/matrix.hpp"
#include "test_support.hpp"

using namespace mub;

TEST_SUITE("matrix") {
  TEST_CASE("identity times identity") {
    const auto i3 = ComplexMatrix::identity(3);
    CHECK(multiply(i3, i3) == i3);
  }

  TEST_CASE("pure rotation block times its adjoint is the identity") {
    const auto e = elementary_rotation(1, 2, std::numbers::pi / 2, 0, 0, 2);
    CHECK(max_abs_difference(multiply(e, adjoint(e)), ComplexMatrix::identity(2)) < 1e-15);
  }

  TEST_CASE("multiply agrees with the triple-loop oracle") {
    RandomStream rng(11);
    for (int trial = 0; trial < 50; ++trial) {
      const auto a = testing::random_matrix(3, 3, rng);
      const auto b = testing::random_matrix(3, 3, rng);
      CHECK(max_abs_difference(multiply(a, b), testing::triple_loop_product(a, b)) < 1e-14);
    }
    const auto a = testing::random_matrix(2, 5, rng);
    const auto b = testing::random_matrix(5, 3, rng);
    const auto c = multiply(a, b);
    CHECK(c.rows() == 2);
    CHECK(c.cols() == 3);
    CHECK(max_abs_difference(c, testing::triple_loop_product(a, b)) < 1e-14);
  }

  TEST_CASE("dimension mismatch is rejected") {
    CHECK_THROWS_AS(multiply(ComplexMatrix(2, 3), ComplexMatrix(2, 3)), std::invalid_argument);
    CHECK_THROWS_AS(unitarity_defect(ComplexMatrix(2, 3)), std::invalid_argument);
    CHECK_THROWS_AS(ComplexMatrix(2, 2, std::vector<Complex>(3)), std::invalid_argument);
  }

  TEST_CASE("non-finite entries are rejected") {
    std::vector<Complex> z(4, 0.0);
    z[2] = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
    CHECK_THROWS_AS(ComplexMatrix(2, 2, z), std::invalid_argument);
    z[2] = Complex(0.0, std::numeric_limits<double>::infinity());
    CHECK_THROWS_AS(ComplexMatrix(2, 2, z), std::invalid_argument);
  }

  TEST_CASE("adjoint examples") {
    CHECK(adjoint(ComplexMatrix::identity(4)) == ComplexMatrix::identity(4));
    const Complex i(0, 1);
    const ComplexMatrix a(2, 2, {0, i, 0, 0});
    const ComplexMatrix expected(2, 2, {0, 0, -i, 0});
    CHECK(adjoint(a) == expected);

    RandomStream rng(3);
    const auto r = testing::random_matrix(3, 4, rng);
    CHECK(adjoint(adjoint(r)) == r);
  }

  TEST_CASE("adjoint of a sampled Haar matrix inverts it") {
    RandomStream rng(5);
    const auto u = compose_unitary(sample_haar_angles(6, rng));
    CHECK(max_abs_difference(multiply(adjoint(u), u), ComplexMatrix::identity(6)) < 1e-12);
  }

  TEST_CASE("unitarity_defect examples") {
    CHECK(unitarity_defect(ComplexMatrix::identity(5)) == 0.0);
    ComplexMatrix two(2, 2, {2.0, 0.0, 0.0, 2.0});
    CHECK(unitarity_defect(two) == doctest::Approx(3.0));
    RandomStream rng(17);
    CHECK(unitarity_defect(compose_unitary(testing::random_angles(6, rng))) < 1e-12);
  }

  TEST_CASE("adjoint reverses products") {
    RandomStream rng(23);
    for (int trial = 0; trial < 100; ++trial) {
      const auto a = testing::random_matrix(4, 3, rng);
      const auto b = testing::random_matrix(3, 5, rng);
      CHECK(max_abs_difference(adjoint(multiply(a, b)), multiply(adjoint(b), adjoint(a))) < 1e-14);
    }
  }

  TEST_CASE("multiply is associative on unit-norm 6x6 triples") {
    RandomStream rng(29);
    for (int trial = 0; trial < 100; ++trial) {
      const auto a = testing::random_unit_norm(6, rng);
      const auto b = testing::random_unit_norm(6, rng);
      const auto c = testing::random_unit_norm(6, rng);
      CHECK(max_abs_difference(multiply(multiply(a, b), c), multiply(a, multiply(b, c))) < 1e-13);
    }
  }
}
