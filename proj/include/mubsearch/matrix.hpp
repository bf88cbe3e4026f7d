#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace mub {

using Complex = std::complex<double>;

/// Dense row-major complex matrix. Entries are always finite.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  /// Zero matrix of the given shape.
  ComplexMatrix(std::size_t rows, std::size_t cols);
  /// Takes row-major entries; throws std::invalid_argument on a size mismatch
  /// or a non-finite entry.
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

  static ComplexMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  Complex& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const noexcept {
    return data_[r * cols_ + c];
  }

  std::span<const Complex> entries() const noexcept { return data_; }
  std::span<Complex> entries() noexcept { return data_; }

  bool operator==(const ComplexMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

/// Standard product; throws std::invalid_argument when a.cols() != b.rows().
ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b);

/// Conjugate transpose.
ComplexMatrix adjoint(const ComplexMatrix& a);

/// max |(a^H a - I)_{ij}|. Throws std::invalid_argument for non-square input.
double unitarity_defect(const ComplexMatrix& a);

/// Largest entrywise |a_ij - b_ij|; shapes must agree.
double max_abs_difference(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace mub
