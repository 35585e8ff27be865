#include "specoarse/shifted_lu.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "specoarse/error.hpp"

namespace specoarse {
namespace {

double clamp_pivot(double pivot, double floor) {
  if (std::abs(pivot) >= floor) return pivot;
  return pivot < 0.0 ? -floor : floor;
}

}  // namespace

// Row interchanges are applied to columns >= k only (LINPACK ordering), so the
// multipliers of column k stay where elimination wrote them and the forward
// solve replays swap-then-eliminate step by step.

BandedLU::BandedLU(const SparseMatrix& a, double shift, double pivot_floor)
    : n_(a.nrows()), lower_(a.bandwidth()), width_(3 * a.bandwidth() + 1) {
  if (!a.is_square()) throw Error(ErrorCode::NotSquare, "banded LU needs a square matrix");
  band_.assign(n_ * width_, 0.0);
  pivots_.resize(n_);
  const auto rp = a.row_ptr();
  const auto ci = a.col_idx();
  const auto v = a.values();
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t p = rp[i]; p < rp[i + 1]; ++p) at(i, ci[p]) = v[p];
    at(i, i) -= shift;
  }

  const std::size_t b = lower_;
  min_pivot_ = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n_; ++k) {
    const std::size_t last_row = std::min(n_ - 1, k + b);
    const std::size_t last_col = std::min(n_ - 1, k + 2 * b);
    std::size_t piv = k;
    for (std::size_t i = k + 1; i <= last_row; ++i)
      if (std::abs(at(i, k)) > std::abs(at(piv, k))) piv = i;
    pivots_[k] = piv;
    if (piv != k) {
      for (std::size_t j = k; j <= last_col; ++j) std::swap(at(k, j), at(piv, j));
    }
    min_pivot_ = std::min(min_pivot_, std::abs(at(k, k)));
    at(k, k) = clamp_pivot(at(k, k), pivot_floor);
    const double d = at(k, k);
    for (std::size_t i = k + 1; i <= last_row; ++i) {
      const double l = at(i, k) / d;
      at(i, k) = l;
      if (l == 0.0) continue;
      for (std::size_t j = k + 1; j <= last_col; ++j) at(i, j) -= l * at(k, j);
    }
  }
  if (n_ == 0) min_pivot_ = 0.0;
}

void BandedLU::solve(std::span<double> rhs) const {
  if (rhs.size() != n_) throw Error(ErrorCode::DimensionMismatch, "banded LU solve: wrong rhs length");
  const std::size_t b = lower_;
  for (std::size_t k = 0; k < n_; ++k) {
    std::swap(rhs[k], rhs[pivots_[k]]);
    const std::size_t last_row = std::min(n_ - 1, k + b);
    for (std::size_t i = k + 1; i <= last_row; ++i) rhs[i] -= at(i, k) * rhs[k];
  }
  for (std::size_t k = n_; k-- > 0;) {
    const std::size_t last_col = std::min(n_ - 1, k + 2 * b);
    double s = rhs[k];
    for (std::size_t j = k + 1; j <= last_col; ++j) s -= at(k, j) * rhs[j];
    rhs[k] = s / at(k, k);
  }
}

DenseLU::DenseLU(const SparseMatrix& a, double shift, double pivot_floor) : n_(a.nrows()) {
  if (!a.is_square()) throw Error(ErrorCode::NotSquare, "dense LU needs a square matrix");
  lu_.assign(n_ * n_, 0.0);
  pivots_.resize(n_);
  auto m = [&](std::size_t i, std::size_t j) -> double& { return lu_[i * n_ + j]; };
  const auto rp = a.row_ptr();
  const auto ci = a.col_idx();
  const auto v = a.values();
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t p = rp[i]; p < rp[i + 1]; ++p) m(i, ci[p]) = v[p];
    m(i, i) -= shift;
  }

  min_pivot_ = n_ == 0 ? 0.0 : std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n_; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n_; ++i)
      if (std::abs(m(i, k)) > std::abs(m(piv, k))) piv = i;
    pivots_[k] = piv;
    if (piv != k) {
      for (std::size_t j = k; j < n_; ++j) std::swap(m(k, j), m(piv, j));
    }
    min_pivot_ = std::min(min_pivot_, std::abs(m(k, k)));
    m(k, k) = clamp_pivot(m(k, k), pivot_floor);
    const double d = m(k, k);
    for (std::size_t i = k + 1; i < n_; ++i) {
      const double l = m(i, k) / d;
      m(i, k) = l;
      if (l == 0.0) continue;
      double* row_i = &lu_[i * n_];
      const double* row_k = &lu_[k * n_];
      for (std::size_t j = k + 1; j < n_; ++j) row_i[j] -= l * row_k[j];
    }
  }
}

void DenseLU::solve(std::span<double> rhs) const {
  if (rhs.size() != n_) throw Error(ErrorCode::DimensionMismatch, "dense LU solve: wrong rhs length");
  for (std::size_t k = 0; k < n_; ++k) {
    std::swap(rhs[k], rhs[pivots_[k]]);
    for (std::size_t i = k + 1; i < n_; ++i) rhs[i] -= lu_[i * n_ + k] * rhs[k];
  }
  for (std::size_t k = n_; k-- > 0;) {
    double s = rhs[k];
    for (std::size_t j = k + 1; j < n_; ++j) s -= lu_[k * n_ + j] * rhs[j];
    rhs[k] = s / lu_[k * n_ + k];
  }
}

std::unique_ptr<ShiftedFactorization> factorize_shifted(const SparseMatrix& a, double shift,
                                                        double pivot_floor) {
  if (4 * a.bandwidth() <= a.nrows()) return std::make_unique<BandedLU>(a, shift, pivot_floor);
  return std::make_unique<DenseLU>(a, shift, pivot_floor);
}

}  // namespace specoarse
