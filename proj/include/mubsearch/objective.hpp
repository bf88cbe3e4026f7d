#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mubsearch/hurwitz.hpp"
#include "mubsearch/matrix.hpp"

namespace mub {

/// m orthonormal bases of C^d, each stored as a d x d matrix whose columns
/// are the basis vectors. With `gauge_fixed`, bases[0] is the identity.
///
/// Orthonormality is not enforced here: verify_mub reports it, so that broken
/// inputs can still be loaded and diagnosed.
struct BasisSet {
  std::size_t d = 0;
  std::size_t m = 0;
  bool gauge_fixed = false;
  std::vector<ComplexMatrix> bases;

  /// Throws std::invalid_argument when shapes disagree with (d, m), d < 2,
  /// m < 1, or gauge_fixed is set and bases[0] is not the identity.
  void validate() const;
};

/// Location and size of the largest single-entry deviation | |(Ui^H Uj)_lm|^2 - 1/d |.
struct WorstEntry {
  std::size_t basis_i = 0;  ///< 1-based
  std::size_t basis_j = 0;  ///< 1-based
  std::size_t row = 0;      ///< 0-based
  std::size_t col = 0;      ///< 0-based
  double value = 0.0;
};

struct PairResidual {
  std::size_t i = 0;  ///< 1-based, i < j
  std::size_t j = 0;
  double residual = 0.0;
};

struct ResidualReport {
  double total = 0.0;
  std::vector<PairResidual> per_pair;  ///< every pair i < j, lexicographic order
  WorstEntry worst_entry;
  std::size_t pair_count = 0;
};

/// a^H b: entry (l, m) is <a column l | b column m>.
ComplexMatrix overlap_matrix(const ComplexMatrix& a, const ComplexMatrix& b);

/// Sum over all d^2 entries of ( |(a^H b)_lm|^2 - 1/d )^2.
double pair_residual(const ComplexMatrix& a, const ComplexMatrix& b);

/// Residual summed over every pair i < j of the given bases.
double objective_of_bases(std::span<const ComplexMatrix> bases);

/// Objective over Hurwitz angle vectors, one per basis (m - 1 of them with
/// gauge_fixed, the identity being prepended). Throws on a wrong count or length.
double objective(std::span<const AngleVector> x, std::size_t d, std::size_t m, bool gauge_fixed);

/// Reusable evaluator over one flat coordinate vector: the per-basis angle
/// vectors concatenated in basis order.
///
/// Each basis matrix and pair residual is cached against the exact angles
/// that produced it, so a call that moves a few coordinates only recomputes
/// the touched bases and their pairs. Results are bit-identical to a cold
/// evaluation. Not thread-safe; each concurrent worker needs its own instance.
class ObjectiveEvaluator {
 public:
  ObjectiveEvaluator(std::size_t d, std::size_t m, bool gauge_fixed);

  std::size_t d() const noexcept { return d_; }
  std::size_t m() const noexcept { return m_; }
  bool gauge_fixed() const noexcept { return gauge_fixed_; }
  /// Number of free bases times d^2.
  std::size_t dimension() const noexcept { return free_bases() * angle_count(d_); }
  std::size_t free_bases() const noexcept { return gauge_fixed_ ? m_ - 1 : m_; }

  double operator()(std::span<const double> x);

  /// Splits a flat vector into per-basis angle vectors.
  std::vector<AngleVector> split(std::span<const double> x) const;
  /// Assembles the full basis set (identity prepended when gauge fixed).
  BasisSet assemble(std::span<const double> x) const;

 private:
  std::size_t d_;
  std::size_t m_;
  bool gauge_fixed_;
  std::vector<ComplexMatrix> bases_;
  std::vector<double> cached_x_;
  std::vector<bool> basis_valid_;
  std::vector<double> pair_cache_;  // upper triangle, row-major over (i, j)
  std::vector<bool> basis_dirty_;
};

ResidualReport residual_report(const BasisSet& set);

struct Verification {
  bool passed = false;
  bool orthonormal = false;  ///< every basis has unitarity_defect < tol
  bool unbiased = false;     ///< every cross-pair overlap modulus within tol of 1/sqrt(d)
  double worst_unitarity_defect = 0.0;
  double worst_modulus_deviation = 0.0;
  ResidualReport report;
};

/// Checks both branches of the MU condition at tolerance `tol`.
Verification verify_mub(const BasisSet& set, double tol);

/// max | |h_lm| - 1/sqrt(d) | < tol. Throws std::invalid_argument for non-square h.
bool is_hadamard_like(const ComplexMatrix& h, double tol);

/// Largest subset of 1-based basis indices whose pairs are all unbiased at
/// `tol`; ties go to the lexicographically smallest index list.
std::vector<std::size_t> max_mu_subset(const BasisSet& set, double tol);

}  // namespace mub
