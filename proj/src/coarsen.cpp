#include "specoarse/coarsen.hpp"

#include <cmath>

#include "specoarse/error.hpp"

namespace specoarse {

InterpolationOperator::InterpolationOperator(Partition part, bool normalized)
    : part_(std::move(part)), scale_(part_.n_aggregates(), 1.0), normalized_(normalized) {
  if (normalized_) {
    std::vector<std::size_t> size(part_.n_aggregates(), 0);
    for (std::size_t i = 0; i < part_.size(); ++i) ++size[part_[i]];
    for (std::size_t j = 0; j < size.size(); ++j) scale_[j] = 1.0 / std::sqrt(static_cast<double>(size[j]));
  }
}

DenseMatrix InterpolationOperator::to_dense() const {
  DenseMatrix p(nrows(), ncols());
  for (std::size_t i = 0; i < nrows(); ++i) p(i, part_[i]) = row_value(i);
  return p;
}

InterpolationOperator build_interpolation(const Partition& p, bool normalized) {
  return InterpolationOperator(p, normalized);
}

namespace serial {

DenseMatrix galerkin_product(const SparseMatrix& a, const InterpolationOperator& p) {
  if (!a.is_square()) throw Error(ErrorCode::NotSquare, "Galerkin product needs a square matrix");
  if (p.nrows() != a.nrows()) {
    throw Error(ErrorCode::DimensionMismatch, "P has " + std::to_string(p.nrows()) + " rows, A has " +
                                                  std::to_string(a.nrows()));
  }
  const auto rp = a.row_ptr();
  const auto ci = a.col_idx();
  const auto v = a.values();
  const auto& part = p.partition();
  const auto& s = p.column_scale();
  DenseMatrix ac(p.ncols(), p.ncols());
  for (std::size_t k = 0; k < a.nrows(); ++k) {
    const std::size_t ik = part[k];
    for (std::size_t q = rp[k]; q < rp[k + 1]; ++q) {
      const std::size_t jl = part[ci[q]];
      ac(ik, jl) += s[ik] * s[jl] * v[q];
    }
  }
  return ac;
}

}  // namespace serial

DenseMatrix galerkin_product(const SparseMatrix& a, const InterpolationOperator& p) {
  if (!a.is_square()) throw Error(ErrorCode::NotSquare, "Galerkin product needs a square matrix");
  if (p.nrows() != a.nrows()) {
    throw Error(ErrorCode::DimensionMismatch, "P has " + std::to_string(p.nrows()) + " rows, A has " +
                                                  std::to_string(a.nrows()));
  }
  const auto rp = a.row_ptr();
  const auto ci = a.col_idx();
  const auto v = a.values();
  const auto& part = p.partition();
  const auto& s = p.column_scale();
  const auto groups = inverse_part(part);
  DenseMatrix ac(p.ncols(), p.ncols());
  // Coarse row i only receives contributions from fine rows in G_i, visited
  // in ascending order exactly as the serial pass does.
  const auto nc = static_cast<std::ptrdiff_t>(p.ncols());
#pragma omp parallel for schedule(dynamic, 8) if (a.nnz() > 20000)
  for (std::ptrdiff_t ii = 0; ii < nc; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    for (std::size_t k : groups[i]) {
      for (std::size_t q = rp[k]; q < rp[k + 1]; ++q) {
        const std::size_t jl = part[ci[q]];
        ac(i, jl) += s[i] * s[jl] * v[q];
      }
    }
  }
  return ac;
}

DenseMatrix two_sided_product(const SparseMatrix& a, const InterpolationOperator& u,
                              const InterpolationOperator& v) {
  if (u.nrows() != a.nrows() || v.nrows() != a.ncols()) {
    throw Error(ErrorCode::DimensionMismatch,
                "U is " + std::to_string(u.nrows()) + " rows, V is " + std::to_string(v.nrows()) +
                    " rows, A is " + std::to_string(a.nrows()) + "x" + std::to_string(a.ncols()));
  }
  if (!u.normalized() || !v.normalized()) {
    throw Error(ErrorCode::RequiresNormalized, "U^T A V needs column-normalized U and V");
  }
  const auto rp = a.row_ptr();
  const auto ci = a.col_idx();
  const auto vals = a.values();
  const auto& su = u.column_scale();
  const auto& sv = v.column_scale();
  DenseMatrix b(u.ncols(), v.ncols());
  for (std::size_t k = 0; k < a.nrows(); ++k) {
    const std::size_t i = u.partition()[k];
    for (std::size_t q = rp[k]; q < rp[k + 1]; ++q) {
      const std::size_t j = v.partition()[ci[q]];
      b(i, j) += su[i] * sv[j] * vals[q];
    }
  }
  return b;
}

}  // namespace specoarse
