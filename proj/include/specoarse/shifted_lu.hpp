#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "specoarse/sparse_matrix.hpp"

namespace specoarse {

/// LU factorization of (A - shift I) with partial pivoting.
class ShiftedFactorization {
 public:
  virtual ~ShiftedFactorization() = default;

  /// Overwrites rhs with the solution.
  virtual void solve(std::span<double> rhs) const = 0;
  /// Smallest |pivot| met during elimination.
  virtual double min_pivot() const noexcept = 0;
  virtual bool banded() const noexcept = 0;
};

/// Band storage for kl = ku = bandwidth; row interchanges widen the upper
/// band to 2 * bandwidth.
class BandedLU final : public ShiftedFactorization {
 public:
  BandedLU(const SparseMatrix& a, double shift, double pivot_floor);

  void solve(std::span<double> rhs) const override;
  double min_pivot() const noexcept override { return min_pivot_; }
  bool banded() const noexcept override { return true; }

 private:
  double& at(std::size_t i, std::size_t j) noexcept { return band_[i * width_ + (j + lower_ - i)]; }
  double at(std::size_t i, std::size_t j) const noexcept { return band_[i * width_ + (j + lower_ - i)]; }

  std::size_t n_ = 0;
  std::size_t lower_ = 0;
  std::size_t width_ = 0;
  std::vector<double> band_;
  std::vector<std::size_t> pivots_;
  double min_pivot_ = 0.0;
};

class DenseLU final : public ShiftedFactorization {
 public:
  DenseLU(const SparseMatrix& a, double shift, double pivot_floor);

  void solve(std::span<double> rhs) const override;
  double min_pivot() const noexcept override { return min_pivot_; }
  bool banded() const noexcept override { return false; }

 private:
  std::size_t n_ = 0;
  std::vector<double> lu_;
  std::vector<std::size_t> pivots_;
  double min_pivot_ = 0.0;
};

/// Banded when bandwidth <= N/4, dense otherwise. Pivots smaller than
/// pivot_floor are clamped to +-pivot_floor so solves stay finite; the true
/// smallest pivot is still reported by min_pivot().
std::unique_ptr<ShiftedFactorization> factorize_shifted(const SparseMatrix& a, double shift,
                                                        double pivot_floor);

}  // namespace specoarse
