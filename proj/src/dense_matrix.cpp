#include "specoarse/dense_matrix.hpp"

#include <algorithm>
#include <cmath>

#include "specoarse/error.hpp"

namespace specoarse {

DenseMatrix::DenseMatrix(std::size_t nrows, std::size_t ncols, double fill)
    : nrows_(nrows), ncols_(ncols), data_(nrows * ncols, fill) {}

DenseMatrix::DenseMatrix(std::size_t nrows, std::size_t ncols, std::vector<double> data)
    : nrows_(nrows), ncols_(ncols), data_(std::move(data)) {
  if (data_.size() != nrows_ * ncols_) {
    throw Error(ErrorCode::DimensionMismatch, "dense data length " + std::to_string(data_.size()) +
                                                  " != " + std::to_string(nrows_) + "x" +
                                                  std::to_string(ncols_));
  }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(ncols_, nrows_);
  for (std::size_t i = 0; i < nrows_; ++i)
    for (std::size_t j = 0; j < ncols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double DenseMatrix::trace() const {
  if (!is_square()) throw Error(ErrorCode::NotSquare, "trace of a non-square matrix");
  double s = 0.0;
  for (std::size_t i = 0; i < nrows_; ++i) s += (*this)(i, i);
  return s;
}

double DenseMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

double DenseMatrix::asymmetry() const {
  if (!is_square()) throw Error(ErrorCode::NotSquare, "asymmetry of a non-square matrix");
  double worst = 0.0;
  for (std::size_t i = 0; i < nrows_; ++i)
    for (std::size_t j = i + 1; j < ncols_; ++j)
      worst = std::max(worst, std::abs((*this)(i, j) - (*this)(j, i)));
  return worst;
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.ncols() != b.nrows()) {
    throw Error(ErrorCode::DimensionMismatch, "multiply: inner dimensions differ");
  }
  DenseMatrix c(a.nrows(), b.ncols());
  for (std::size_t i = 0; i < a.nrows(); ++i)
    for (std::size_t k = 0; k < a.ncols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.ncols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

}  // namespace specoarse
