#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mubsearch/hurwitz.hpp"
#include "mubsearch/stats.hpp"
#include "test_support.hpp"

using namespace mub;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Upper 1% point of chi-square with 19 degrees of freedom (scipy.stats.chi2.ppf).
constexpr double kChi2Dof19P01 = 36.19086912927004;

double chi2_uniform_phases(const std::vector<double>& phases, std::size_t bins) {
  std::vector<double> counts(bins, 0.0);
  for (double p : phases) {
    double t = std::fmod(p, kTwoPi);
    if (t < 0) t += kTwoPi;
    counts[std::min(bins - 1, static_cast<std::size_t>(t / kTwoPi * bins))] += 1.0;
  }
  const double expected = static_cast<double>(phases.size()) / bins;
  double chi2 = 0.0;
  for (double c : counts) chi2 += (c - expected) * (c - expected) / expected;
  return chi2;
}

std::vector<double> eigenphases(const ComplexMatrix& u) {
  const auto n = static_cast<Eigen::Index>(u.rows());
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = u(i, j);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
  std::vector<double> out;
  for (Eigen::Index i = 0; i < n; ++i) out.push_back(std::arg(es.eigenvalues()(i)));
  return out;
}

}  // namespace

TEST_SUITE("hurwitz") {
  TEST_CASE("angle count is n squared") {
    for (std::size_t n = 2; n <= 8; ++n) {
      CHECK(angle_count(n) == n * n);
      CHECK(HurwitzAngles(n).size() == n * n);
      RandomStream rng(n);
      CHECK(sample_haar_angles(n, rng).to_vector().size() == n * n);
    }
    CHECK_THROWS_AS(HurwitzAngles(1), std::invalid_argument);
    RandomStream rng(1);
    CHECK_THROWS_AS(sample_haar_angles(1, rng), std::invalid_argument);
  }

  TEST_CASE("elementary rotation matches the literal definition") {
    const auto e = elementary_rotation(2, 4, 0.3, -1.1, 2.5, 5);
    CHECK(max_abs_difference(e, testing::literal_rotation(2, 4, 0.3, -1.1, 2.5, 5)) < 1e-15);
    CHECK(unitarity_defect(e) < 1e-15);
    CHECK_THROWS_AS(elementary_rotation(0, 1, 0, 0, 0, 3), std::invalid_argument);
    CHECK_THROWS_AS(elementary_rotation(2, 2, 0, 0, 0, 3), std::invalid_argument);
    CHECK_THROWS_AS(elementary_rotation(2, 4, 0, 0, 0, 3), std::invalid_argument);
  }

  TEST_CASE("composite E_3 for N = 4 matches the literal schedule") {
    RandomStream rng(41);
    const auto a = testing::random_angles(4, rng, 3.0);
    const auto got = composite_transformation(3, a);
    // Written out by hand: planes (1,2), (2,3), (3,4).
    auto expected = testing::triple_loop_product(
        testing::triple_loop_product(
            testing::literal_rotation(1, 2, a.phi(2, 3), a.psi(2, 3), 0.0, 4),
            testing::literal_rotation(2, 3, a.phi(1, 3), a.psi(1, 3), 0.0, 4)),
        testing::literal_rotation(3, 4, a.phi(0, 3), a.psi(0, 3), a.chi(3), 4));
    CHECK(max_abs_difference(got, expected) < 1e-14);
    for (std::size_t k = 1; k < 4; ++k)
      CHECK(max_abs_difference(composite_transformation(k, a), testing::literal_composite(k, a)) <
            1e-14);
  }

  TEST_CASE("compose_unitary matches the literal product and the fast path") {
    RandomStream rng(43);
    for (std::size_t n = 2; n <= 7; ++n) {
      for (int trial = 0; trial < 10; ++trial) {
        const auto a = testing::random_angles(n, rng);
        const auto u = compose_unitary(a);
        CHECK(max_abs_difference(u, testing::literal_unitary(a)) < 1e-13);
        ComplexMatrix fast(n, n);
        const auto v = a.to_vector();
        compose_unitary_into(v, n, fast);
        CHECK(max_abs_difference(u, fast) < 1e-13);
      }
    }
  }

  TEST_CASE("flat vector layout follows factor order") {
    HurwitzAngles a(3);
    a.set_alpha(1);
    a.set_phi(0, 1, 2);
    a.set_psi(0, 1, 3);
    a.set_chi(1, 4);
    a.set_phi(1, 2, 5);
    a.set_psi(1, 2, 6);
    a.set_phi(0, 2, 7);
    a.set_psi(0, 2, 8);
    a.set_chi(2, 9);
    CHECK(a.to_vector() == AngleVector{1, 2, 3, 4, 5, 6, 7, 8, 9});
  }

  TEST_CASE("angle vector round trip is bit exact") {
    RandomStream rng(47);
    for (std::size_t n = 2; n <= 8; ++n) {
      const auto a = sample_haar_angles(n, rng);
      const auto v = a.to_vector();
      const auto b = HurwitzAngles::from_vector(n, v);
      CHECK(b.to_vector() == v);
      CHECK(compose_unitary(b) == compose_unitary(a));
    }
    const AngleVector wrong(5, 0.0);
    CHECK_THROWS_AS(HurwitzAngles::from_vector(2, wrong), std::invalid_argument);
  }

  TEST_CASE("all-zero angles give the identity") {
    for (std::size_t n = 2; n <= 6; ++n)
      CHECK(max_abs_difference(compose_unitary(HurwitzAngles(n)), ComplexMatrix::identity(n)) <
            1e-15);
  }

  TEST_CASE("sampled matrices are unitary") {
    RandomStream rng(53);
    for (std::size_t n = 2; n <= 8; ++n) {
      double worst = 0.0;
      for (int trial = 0; trial < 1000; ++trial)
        worst = std::max(worst, unitarity_defect(compose_unitary(sample_haar_angles(n, rng))));
      CHECK(worst < 1e-12);
    }
  }

  TEST_CASE("arbitrary real angles give unitary matrices") {
    RandomStream rng(59);
    for (std::size_t n = 2; n <= 8; ++n)
      for (int trial = 0; trial < 100; ++trial)
        CHECK(unitarity_defect(compose_unitary(testing::random_angles(n, rng, 100.0))) < 1e-12);
  }

  TEST_CASE("sampling is deterministic for a fixed seed") {
    RandomStream a(61), b(61), c(62);
    const auto x = sample_haar_angles(6, a).to_vector();
    CHECK(x == sample_haar_angles(6, b).to_vector());
    CHECK(x != sample_haar_angles(6, c).to_vector());
  }

  TEST_CASE("sampled angles lie in their ranges") {
    RandomStream rng(67);
    for (int trial = 0; trial < 200; ++trial) {
      const auto a = sample_haar_angles(5, rng);
      CHECK(a.alpha() >= 0.0);
      CHECK(a.alpha() < kTwoPi);
      for (std::size_t s = 1; s < 5; ++s) {
        CHECK(a.chi(s) >= 0.0);
        CHECK(a.chi(s) < kTwoPi);
        for (std::size_t r = 0; r < s; ++r) {
          CHECK(a.phi(r, s) >= 0.0);
          CHECK(a.phi(r, s) <= std::numbers::pi / 2);
          CHECK(a.psi(r, s) >= 0.0);
          CHECK(a.psi(r, s) < kTwoPi);
        }
      }
    }
  }

  TEST_CASE("n = 2: |U11|^2 is uniform on [0, 1]") {
    RandomStream rng(71);
    std::vector<double> xs;
    for (int i = 0; i < 100000; ++i)
      xs.push_back(std::norm(compose_unitary(sample_haar_angles(2, rng))(0, 0)));
    const double d = testing::ks_uniform_statistic(xs);
    CHECK(kolmogorov_q(std::sqrt(static_cast<double>(xs.size())) * d) > 0.01);
  }

  TEST_CASE("second moments match the Haar value 1/n") {
    for (std::size_t n : {2u, 3u, 6u}) {
      RandomStream rng(73 + n);
      MomentAccumulator acc(n);
      for (int i = 0; i < 10000; ++i) acc.add(compose_unitary(sample_haar_angles(n, rng)));
      CAPTURE(n);
      CHECK(acc.within(3.0));
    }
  }

  TEST_CASE("Hurwitz and QR samplers agree in distribution") {
    for (std::size_t n : {2u, 3u, 6u}) {
      RandomStream rh(79 + n), rq(83 + n);
      std::vector<double> a, b;
      for (int i = 0; i < 10000; ++i) {
        a.push_back(std::norm(compose_unitary(sample_haar_angles(n, rh))(0, 0)));
        b.push_back(std::norm(qr_haar_sample(n, rq)(0, 0)));
      }
      CAPTURE(n);
      CHECK(ks_two_sample(a, b).p_value > 0.01);
    }
  }

  TEST_CASE("the uniform-phi variant is detectably not Haar for n = 6") {
    RandomStream rh(89), rq(97);
    std::vector<double> a, b;
    for (int i = 0; i < 10000; ++i) {
      a.push_back(std::norm(
          compose_unitary(sample_haar_angles(6, rh, SamplingMode::paper_literal_uniform))(0, 0)));
      b.push_back(std::norm(qr_haar_sample(6, rq)(0, 0)));
    }
    CHECK(ks_two_sample(a, b).p_value < 1e-6);
  }

  TEST_CASE("QR sampler: unitary with uniform eigenphases") {
    RandomStream rng(101);
    std::vector<double> phases;
    for (int i = 0; i < 2000; ++i) {
      const auto u = qr_haar_sample(5, rng);
      CHECK(unitarity_defect(u) < 1e-12);
      for (double p : eigenphases(u)) phases.push_back(p);
    }
    CHECK(chi2_uniform_phases(phases, 20) < kChi2Dof19P01);
  }

  TEST_CASE("Hurwitz sampler: uniform eigenphases") {
    RandomStream rng(103);
    std::vector<double> phases;
    for (int i = 0; i < 2000; ++i)
      for (double p : eigenphases(compose_unitary(sample_haar_angles(5, rng))))
        phases.push_back(p);
    CHECK(chi2_uniform_phases(phases, 20) < kChi2Dof19P01);
  }
}
