#pragma once

#include <vector>

#include "specoarse/aggregation.hpp"
#include "specoarse/dense_matrix.hpp"
#include "specoarse/sparse_matrix.hpp"

namespace specoarse {

/// Piecewise-constant prolongation P (N x N_c): row i has its single nonzero
/// in column part(i). Literal mode puts 1 there; normalized mode scales
/// column j by 1/sqrt(|G_j|) so that P^T P = I.
class InterpolationOperator {
 public:
  InterpolationOperator() = default;
  InterpolationOperator(Partition part, bool normalized);

  std::size_t nrows() const noexcept { return part_.size(); }
  std::size_t ncols() const noexcept { return part_.n_aggregates(); }
  bool normalized() const noexcept { return normalized_; }
  const Partition& partition() const noexcept { return part_; }
  const std::vector<double>& column_scale() const noexcept { return scale_; }

  /// Value of the single nonzero in row i.
  double row_value(std::size_t i) const noexcept { return scale_[part_[i]]; }

  DenseMatrix to_dense() const;

 private:
  Partition part_;
  std::vector<double> scale_;
  bool normalized_ = false;
};

InterpolationOperator build_interpolation(const Partition& p, bool normalized);

/// A_c = P^T A P as (A_c)_ij = s_i s_j sum_{k in G_i} sum_{l in G_j} a_kl.
/// Coarse rows are filled in parallel; each entry is accumulated in the same
/// order as the serial kernel, so results match it bit for bit.
DenseMatrix galerkin_product(const SparseMatrix& a, const InterpolationOperator& p);

/// B = U^T A V for an m x n matrix A. Both operators must be normalized.
DenseMatrix two_sided_product(const SparseMatrix& a, const InterpolationOperator& u,
                              const InterpolationOperator& v);

namespace serial {
/// Single pass over the nonzeros of A. Reference for galerkin_product.
DenseMatrix galerkin_product(const SparseMatrix& a, const InterpolationOperator& p);
}  // namespace serial

}  // namespace specoarse
