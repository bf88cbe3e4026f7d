#include "mubsearch/hurwitz.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mub {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Right-multiplies m by E^{i,j}(phi, psi, chi); i and j are 0-based here.
void apply_rotation(ComplexMatrix& m, std::size_t i, std::size_t j, double phi, double psi,
                    double chi) {
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  const Complex eii = std::polar(c, psi);
  const Complex eij = std::polar(s, chi);
  const Complex eji = -std::conj(eij);
  const Complex ejj = std::conj(eii);
  for (std::size_t row = 0; row < m.rows(); ++row) {
    const Complex a = m(row, i);
    const Complex b = m(row, j);
    m(row, i) = a * eii + b * eji;
    m(row, j) = a * eij + b * ejj;
  }
}

}  // namespace

HurwitzAngles::HurwitzAngles(std::size_t n) : n_(n) {
  if (n < 2) throw std::invalid_argument("HurwitzAngles: dimension must be at least 2");
  const std::size_t pairs = n * (n - 1) / 2;
  phi_.assign(pairs, 0.0);
  psi_.assign(pairs, 0.0);
  chi_.assign(n - 1, 0.0);
}

std::size_t HurwitzAngles::pair_index(std::size_t r, std::size_t s) const {
  if (!(r < s && s < n_)) {
    throw std::out_of_range("angle pair (" + std::to_string(r) + "," + std::to_string(s) +
                            ") outside 0 <= r < s <= " + std::to_string(n_ - 1));
  }
  return s * (s - 1) / 2 + r;
}

std::size_t HurwitzAngles::chi_index(std::size_t s) const {
  if (s < 1 || s >= n_) throw std::out_of_range("chi index " + std::to_string(s) + " out of range");
  return s - 1;
}

AngleVector HurwitzAngles::to_vector() const {
  AngleVector out;
  out.reserve(size());
  out.push_back(alpha_);
  for (std::size_t k = 1; k < n_; ++k) {
    for (std::size_t t = 0; t < k; ++t) {
      const std::size_t r = k - 1 - t;
      out.push_back(phi(r, k));
      out.push_back(psi(r, k));
    }
    out.push_back(chi(k));
  }
  return out;
}

HurwitzAngles HurwitzAngles::from_vector(std::size_t n, std::span<const double> values) {
  HurwitzAngles a(n);
  if (values.size() != angle_count(n)) {
    throw std::invalid_argument("angle vector has " + std::to_string(values.size()) +
                                " entries, expected " + std::to_string(angle_count(n)));
  }
  std::size_t pos = 0;
  a.alpha_ = values[pos++];
  for (std::size_t k = 1; k < n; ++k) {
    for (std::size_t t = 0; t < k; ++t) {
      const std::size_t r = k - 1 - t;
      a.set_phi(r, k, values[pos++]);
      a.set_psi(r, k, values[pos++]);
    }
    a.set_chi(k, values[pos++]);
  }
  return a;
}

std::size_t angle_count(std::size_t n) noexcept { return n * n; }

ComplexMatrix elementary_rotation(std::size_t i, std::size_t j, double phi, double psi, double chi,
                                  std::size_t n) {
  if (!(1 <= i && i < j && j <= n)) {
    throw std::invalid_argument("elementary_rotation: need 1 <= i < j <= n, got i=" +
                                std::to_string(i) + " j=" + std::to_string(j) +
                                " n=" + std::to_string(n));
  }
  ComplexMatrix e = ComplexMatrix::identity(n);
  e(i - 1, i - 1) = std::polar(std::cos(phi), psi);
  e(i - 1, j - 1) = std::polar(std::sin(phi), chi);
  e(j - 1, i - 1) = -std::polar(std::sin(phi), -chi);
  e(j - 1, j - 1) = std::polar(std::cos(phi), -psi);
  return e;
}

ComplexMatrix composite_transformation(std::size_t k, const HurwitzAngles& angles) {
  const std::size_t n = angles.n();
  if (k < 1 || k >= n) {
    throw std::invalid_argument("composite_transformation: k=" + std::to_string(k) +
                                " outside 1.." + std::to_string(n - 1));
  }
  ComplexMatrix e = ComplexMatrix::identity(n);
  for (std::size_t t = 0; t < k; ++t) {
    const std::size_t r = k - 1 - t;
    const std::size_t i = n - k + t;
    const double chi = (t + 1 == k) ? angles.chi(k) : 0.0;
    e = multiply(e, elementary_rotation(i, i + 1, angles.phi(r, k), angles.psi(r, k), chi, n));
  }
  return e;
}

ComplexMatrix compose_unitary(const HurwitzAngles& angles) {
  ComplexMatrix u(angles.n(), angles.n());
  compose_unitary_into(angles.to_vector(), angles.n(), u);
  return u;
}

void compose_unitary_into(std::span<const double> angles, std::size_t n, ComplexMatrix& out) {
  if (n < 2 || angles.size() != angle_count(n)) {
    throw std::invalid_argument("compose_unitary: malformed angle set for n=" + std::to_string(n));
  }
  if (out.rows() != n || out.cols() != n) out = ComplexMatrix(n, n);
  auto entries = out.entries();
  std::fill(entries.begin(), entries.end(), Complex{});
  for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;

  std::size_t pos = 1;
  for (std::size_t k = 1; k < n; ++k) {
    for (std::size_t t = 0; t < k; ++t) {
      const std::size_t i = n - k + t - 1;  // 0-based plane (i, i+1)
      const double phi = angles[pos];
      const double psi = angles[pos + 1];
      pos += 2;
      const double chi = (t + 1 == k) ? angles[pos++] : 0.0;
      apply_rotation(out, i, i + 1, phi, psi, chi);
    }
  }
  const Complex phase = std::polar(1.0, angles[0]);
  for (auto& z : entries) z *= phase;
}

HurwitzAngles sample_haar_angles(std::size_t n, RandomStream& rng, SamplingMode mode) {
  if (n < 2) throw std::invalid_argument("sample_haar_angles: dimension must be at least 2");
  HurwitzAngles a(n);
  a.set_alpha(rng.uniform(0.0, kTwoPi));
  for (std::size_t k = 1; k < n; ++k) {
    for (std::size_t t = 0; t < k; ++t) {
      const std::size_t r = k - 1 - t;
      const double u = rng.uniform01();
      double phi;
      if (mode == SamplingMode::haar) {
        // Inverse CDF of d[(sin phi)^(2(r+1))] on [0, pi/2].
        phi = std::asin(std::pow(u, 1.0 / (2.0 * static_cast<double>(r + 1))));
      } else {
        phi = 0.5 * std::numbers::pi * u;
      }
      a.set_phi(r, k, phi);
      a.set_psi(r, k, rng.uniform(0.0, kTwoPi));
    }
    a.set_chi(k, rng.uniform(0.0, kTwoPi));
  }
  return a;
}

ComplexMatrix qr_haar_sample(std::size_t n, RandomStream& rng) {
  if (n < 1) throw std::invalid_argument("qr_haar_sample: dimension must be at least 1");
  ComplexMatrix q(n, n);
  const double scale = std::sqrt(0.5);
  for (auto& z : q.entries()) {
    const double re = rng.normal();
    const double im = rng.normal();
    z = Complex(re * scale, im * scale);
  }
  // Modified Gram-Schmidt on columns; R's diagonal comes out positive.
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t p = 0; p < c; ++p) {
      Complex dot = 0.0;
      for (std::size_t r = 0; r < n; ++r) dot += std::conj(q(r, p)) * q(r, c);
      for (std::size_t r = 0; r < n; ++r) q(r, c) -= dot * q(r, p);
    }
    double norm = 0.0;
    for (std::size_t r = 0; r < n; ++r) norm += std::norm(q(r, c));
    norm = std::sqrt(norm);
    for (std::size_t r = 0; r < n; ++r) q(r, c) /= norm;
  }
  return q;
}

}  // namespace mub
