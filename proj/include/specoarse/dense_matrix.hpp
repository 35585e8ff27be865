#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace specoarse {

/// Row-major dense real matrix. Used for coarse operators, which are small.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t nrows, std::size_t ncols, double fill = 0.0);
  DenseMatrix(std::size_t nrows, std::size_t ncols, std::vector<double> data);

  static DenseMatrix identity(std::size_t n);

  std::size_t nrows() const noexcept { return nrows_; }
  std::size_t ncols() const noexcept { return ncols_; }
  bool is_square() const noexcept { return nrows_ == ncols_; }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * ncols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * ncols_ + j]; }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }
  std::span<const double> row(std::size_t i) const noexcept {
    return std::span<const double>(data_).subspan(i * ncols_, ncols_);
  }

  DenseMatrix transpose() const;
  double trace() const;
  double frobenius_norm() const;
  /// max_{i,j} |M_ij - M_ji|; requires a square matrix.
  double asymmetry() const;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t nrows_ = 0;
  std::size_t ncols_ = 0;
  std::vector<double> data_;
};

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);

}  // namespace specoarse
