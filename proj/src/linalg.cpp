#include "causaltree/linalg.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "causaltree/error.hpp"
#include "causaltree/simd.hpp"

namespace causaltree::linalg {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols)
    throw std::invalid_argument("Matrix: data size does not match shape");
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("multiply: shape mismatch");
  // Row-times-row against bᵀ keeps both operands contiguous for the kernel.
  const Matrix bt = b.transpose();
  Matrix out(a.rows(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < b.cols(); ++c) out(r, c) = simd::dot(a.row(r), bt.row(c));
  return out;
}

SymMatrix::SymMatrix(const Matrix& m) : m_(m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("SymMatrix: matrix is not square");
  if (m.rows() == 0) throw std::invalid_argument("SymMatrix: dimension must be at least 1");
  const std::size_t n = m.rows();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double a = m(i, j);
      const double b = m(j, i);
      if (!std::isfinite(a) || !std::isfinite(b) || std::abs(a - b) > kSymmetryTolerance) {
        std::ostringstream os;
        os << "SymMatrix: entries (" << i << "," << j << ") and (" << j << "," << i
           << ") differ: " << a << " vs " << b;
        throw std::invalid_argument(os.str());
      }
      const double avg = 0.5 * (a + b);
      m_(i, j) = avg;
      m_(j, i) = avg;
    }
    if (!std::isfinite(m(i, i))) throw std::invalid_argument("SymMatrix: non-finite diagonal");
  }
}

SymMatrix::SymMatrix(std::size_t dim, std::vector<double> row_major)
    : SymMatrix(Matrix(dim, dim, std::move(row_major))) {}

SymMatrix SymMatrix::identity(std::size_t n) { return SymMatrix(Matrix::identity(n)); }

SymMatrix SymMatrix::diagonal(std::span<const double> d) {
  Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return SymMatrix(m);
}

SymMatrix SymMatrix::scaled(double c) const {
  Matrix m = m_;
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (double& v : m.row(r)) v *= c;
  return SymMatrix(m);
}

Cholesky::Cholesky(const SymMatrix& m) : l_(m.dim(), m.dim()) {
  const std::size_t n = m.dim();
  for (std::size_t j = 0; j < n; ++j) {
    const auto lj = l_.row(j).first(j);
    const double pivot = m(j, j) - simd::dot(lj, lj);
    if (!(pivot > kPivotFloor)) {
      std::ostringstream os;
      os << "matrix is not positive definite (pivot " << pivot << " at index " << j << ")";
      throw NotPositiveDefinite(os.str());
    }
    const double d = std::sqrt(pivot);
    l_(j, j) = d;
    for (std::size_t i = j + 1; i < n; ++i) {
      const double s = simd::dot(l_.row(i).first(j), lj);
      l_(i, j) = (m(i, j) - s) / d;
    }
  }
}

double Cholesky::log_det() const {
  double s = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) s += std::log(l_(i, i));
  return 2.0 * s;
}

std::vector<double> Cholesky::solve_lower(std::span<const double> b) const {
  const std::size_t n = dim();
  if (b.size() != n) throw std::invalid_argument("Cholesky::solve_lower: size mismatch");
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = simd::dot(l_.row(i).first(i), std::span<const double>(y).first(i));
    y[i] = (b[i] - s) / l_(i, i);
  }
  return y;
}

std::vector<double> Cholesky::solve(std::span<const double> b) const {
  std::vector<double> x = solve_lower(b);
  // Lᵀ x = y, column-oriented so each update reads a contiguous row of L.
  for (std::size_t i = dim(); i-- > 0;) {
    x[i] /= l_(i, i);
    simd::axpy(-x[i], l_.row(i).first(i), std::span<double>(x).first(i));
  }
  return x;
}

double Cholesky::quadratic_form(std::span<const double> b) const {
  const std::vector<double> y = solve_lower(b);
  return simd::dot(y, y);
}

double log_det(const SymMatrix& m) { return Cholesky(m).log_det(); }

namespace {

void check_indices(std::size_t dim, std::span<const std::size_t> indices, bool distinct) {
  std::unordered_set<std::size_t> seen;
  for (std::size_t k : indices) {
    if (k >= dim) {
      std::ostringstream os;
      os << "index " << k << " out of range for dimension " << dim;
      throw IndexOutOfRange(os.str());
    }
    if (distinct && !seen.insert(k).second) {
      std::ostringstream os;
      os << "duplicate index " << k;
      throw IndexOutOfRange(os.str());
    }
  }
}

}  // namespace

SymMatrix submatrix(const SymMatrix& m, std::span<const std::size_t> indices) {
  check_indices(m.dim(), indices, true);
  if (indices.empty()) throw IndexOutOfRange("submatrix: empty index set");
  return SymMatrix(block(m, indices, indices));
}

Matrix block(const SymMatrix& m, std::span<const std::size_t> rows,
             std::span<const std::size_t> cols) {
  check_indices(m.dim(), rows, false);
  check_indices(m.dim(), cols, false);
  Matrix out(rows.size(), cols.size());
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = 0; b < cols.size(); ++b) out(a, b) = m(rows[a], cols[b]);
  return out;
}

}  // namespace causaltree::linalg
