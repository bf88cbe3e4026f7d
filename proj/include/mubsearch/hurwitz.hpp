#pragma once

// Hurwitz (Euler-angle) parameterization of U(N) and Haar sampling.
//
// Matrix indices of the elementary rotations E^{i,j} are 1-based. Angle
// subscripts are the (r, s) pairs of the composite schedule, 0 <= r < s <= N-1:
//
//   E_k = E^{N-k,N-k+1}(phi[k-1,k], psi[k-1,k], 0)
//         * E^{N-k+1,N-k+2}(phi[k-2,k], psi[k-2,k], 0)
//         * ...
//         * E^{N-1,N}(phi[0,k], psi[0,k], chi[k])          k = 1..N-1
//
//   U = exp(i alpha) E_1 E_2 ... E_{N-1}
//
// so the pair (r, s) always rotates the plane (N-1-r, N-r), and chi[s] sits on
// the rightmost factor of E_s.
//
// Flat AngleVector layout (length N^2), in factor order:
//
//   [alpha,
//    phi[0,1], psi[0,1], chi[1],
//    phi[1,2], psi[1,2], phi[0,2], psi[0,2], chi[2],
//    ...
//    phi[N-2,N-1], psi[N-2,N-1], ..., phi[0,N-1], psi[0,N-1], chi[N-1]]

#include <cstddef>
#include <span>
#include <vector>

#include "mubsearch/matrix.hpp"
#include "mubsearch/random.hpp"

namespace mub {

using AngleVector = std::vector<double>;

enum class SamplingMode {
  haar,                   ///< phi[r,s] = asin(u^(1/(2(r+1)))), the Haar density
  paper_literal_uniform,  ///< phi uniform on [0, pi/2]; not Haar for N > 2
};

class HurwitzAngles {
 public:
  /// All angles zero; throws std::invalid_argument for n < 2.
  explicit HurwitzAngles(std::size_t n);

  std::size_t n() const noexcept { return n_; }

  double alpha() const noexcept { return alpha_; }
  void set_alpha(double a) noexcept { alpha_ = a; }

  /// Accessors take the schedule subscripts 0 <= r < s <= n-1; chi takes 1 <= s <= n-1.
  double phi(std::size_t r, std::size_t s) const { return phi_[pair_index(r, s)]; }
  double psi(std::size_t r, std::size_t s) const { return psi_[pair_index(r, s)]; }
  double chi(std::size_t s) const { return chi_[chi_index(s)]; }
  void set_phi(std::size_t r, std::size_t s, double v) { phi_[pair_index(r, s)] = v; }
  void set_psi(std::size_t r, std::size_t s, double v) { psi_[pair_index(r, s)] = v; }
  void set_chi(std::size_t s, double v) { chi_[chi_index(s)] = v; }

  /// Number of stored angles, always n^2.
  std::size_t size() const noexcept { return 1 + phi_.size() + psi_.size() + chi_.size(); }

  AngleVector to_vector() const;
  /// Throws std::invalid_argument unless values.size() == n^2.
  static HurwitzAngles from_vector(std::size_t n, std::span<const double> values);

 private:
  std::size_t pair_index(std::size_t r, std::size_t s) const;
  std::size_t chi_index(std::size_t s) const;

  std::size_t n_;
  double alpha_ = 0.0;
  std::vector<double> phi_;
  std::vector<double> psi_;
  std::vector<double> chi_;
};

/// n^2.
std::size_t angle_count(std::size_t n) noexcept;

/// E^{i,j}(phi, psi, chi) embedded in an n x n identity; 1 <= i < j <= n.
ComplexMatrix elementary_rotation(std::size_t i, std::size_t j, double phi, double psi, double chi,
                                  std::size_t n);

/// Dense product E_k for 1 <= k <= n-1.
ComplexMatrix composite_transformation(std::size_t k, const HurwitzAngles& angles);

/// U = exp(i alpha) E_1 ... E_{N-1}. Any real angles give a unitary matrix.
ComplexMatrix compose_unitary(const HurwitzAngles& angles);

/// Same matrix as compose_unitary, built straight from a flat vector by
/// applying each rotation to two columns in place. `out` must be n x n.
void compose_unitary_into(std::span<const double> angles, std::size_t n, ComplexMatrix& out);

/// Angles for one CUE draw (or the uniform-phi variant); throws for n < 2.
HurwitzAngles sample_haar_angles(std::size_t n, RandomStream& rng,
                                 SamplingMode mode = SamplingMode::haar);

/// Haar unitary from the Gram-Schmidt orthonormalization of a complex Ginibre
/// matrix (positive R diagonal). Independent of the Hurwitz route.
ComplexMatrix qr_haar_sample(std::size_t n, RandomStream& rng);

}  // namespace mub
