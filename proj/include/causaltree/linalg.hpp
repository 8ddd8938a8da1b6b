#pragma once

// Dense linear algebra for covariance work: row-major matrices, a symmetric
// matrix type that enforces symmetry on construction, Cholesky factorization,
// log-determinants and principal submatrices. All logs are natural.

#include <cstddef>
#include <span>
#include <vector>

namespace causaltree::linalg {

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }

  std::span<const double> data() const { return data_; }

  Matrix transpose() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix multiply(const Matrix& a, const Matrix& b);

/// Symmetric dense matrix. Construction rejects inputs whose entries differ
/// from their transposes by more than kSymmetryTolerance and stores the exact
/// symmetrization (M + Mᵀ) / 2.
class SymMatrix {
 public:
  static constexpr double kSymmetryTolerance = 1e-12;

  SymMatrix() = default;
  explicit SymMatrix(const Matrix& m);
  SymMatrix(std::size_t dim, std::vector<double> row_major);

  static SymMatrix identity(std::size_t n);
  static SymMatrix diagonal(std::span<const double> d);

  std::size_t dim() const { return m_.rows(); }
  double operator()(std::size_t r, std::size_t c) const { return m_(r, c); }
  std::span<const double> row(std::size_t r) const { return m_.row(r); }
  const Matrix& matrix() const { return m_; }

  SymMatrix scaled(double c) const;

  friend bool operator==(const SymMatrix&, const SymMatrix&) = default;

 private:
  Matrix m_;
};

/// Lower-triangular Cholesky factor L with M = L·Lᵀ.
class Cholesky {
 public:
  // Pivots (squared diagonal of L) at or below this value are rejected.
  static constexpr double kPivotFloor = 1e-12;

  explicit Cholesky(const SymMatrix& m);

  std::size_t dim() const { return l_.rows(); }
  const Matrix& lower() const { return l_; }

  double log_det() const;

  // Solves L·y = b.
  std::vector<double> solve_lower(std::span<const double> b) const;
  // Solves M·x = b.
  std::vector<double> solve(std::span<const double> b) const;
  // bᵀ M⁻¹ b, as ||L⁻¹ b||².
  double quadratic_form(std::span<const double> b) const;

 private:
  Matrix l_;
};

inline Cholesky cholesky(const SymMatrix& m) { return Cholesky(m); }

double log_det(const SymMatrix& m);

/// Principal submatrix: result(a, b) = m(indices[a], indices[b]).
SymMatrix submatrix(const SymMatrix& m, std::span<const std::size_t> indices);

/// Rectangular block m(rows[a], cols[b]).
Matrix block(const SymMatrix& m, std::span<const std::size_t> rows,
             std::span<const std::size_t> cols);

}  // namespace causaltree::linalg
