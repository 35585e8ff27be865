#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "specoarse/dense_matrix.hpp"

namespace specoarse {

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Compressed sparse row matrix, immutable after construction.
///
/// Structural invariants (checked by validate(), which every constructor
/// runs): row_ptr is nondecreasing, starts at 0 and ends at nnz; column
/// indices inside a row are strictly increasing and below ncols.
///
/// The symmetric flag is computed on construction by checking that every
/// stored (i, j, v) has a stored (j, i) with exactly the same value.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t nrows, std::size_t ncols, std::vector<std::size_t> row_ptr,
               std::vector<std::size_t> col_idx, std::vector<double> values);

  /// Duplicates are summed. Throws IndexOutOfRange.
  static SparseMatrix from_triplets(std::size_t nrows, std::size_t ncols,
                                    std::span<const Triplet> entries);
  static SparseMatrix from_dense(const DenseMatrix& m);
  static SparseMatrix identity(std::size_t n);

  std::size_t nrows() const noexcept { return nrows_; }
  std::size_t ncols() const noexcept { return ncols_; }
  std::size_t nnz() const noexcept { return values_.size(); }
  bool is_square() const noexcept { return nrows_ == ncols_; }
  bool symmetric() const noexcept { return symmetric_; }

  std::span<const std::size_t> row_ptr() const noexcept { return row_ptr_; }
  std::span<const std::size_t> col_idx() const noexcept { return col_idx_; }
  std::span<const double> values() const noexcept { return values_; }

  /// Stored value at (i, j), or 0 when the entry is not stored.
  double at(std::size_t i, std::size_t j) const;

  /// max |i - j| over stored entries.
  std::size_t bandwidth() const noexcept;

  /// Throws InvalidArgument naming the first violated CSR invariant.
  void validate() const;

  DenseMatrix to_dense() const;
  SparseMatrix transpose() const;

 private:
  bool check_symmetric() const;

  std::size_t nrows_ = 0;
  std::size_t ncols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> col_idx_;
  std::vector<double> values_;
  bool symmetric_ = true;
};

struct GershgorinDisc {
  double center;
  double radius;
};

/// y = A x, row-parallel with OpenMP. Each y_i is summed in stored order, so
/// the result is bit-identical to serial::matvec for any thread count.
std::vector<double> matvec(const SparseMatrix& a, std::span<const double> x);
void matvec(const SparseMatrix& a, std::span<const double> x, std::span<double> y);

namespace serial {
/// Reference kernel kept for testing and benchmarking the parallel one.
void matvec(const SparseMatrix& a, std::span<const double> x, std::span<double> y);
}  // namespace serial

double trace(const SparseMatrix& a);
std::vector<GershgorinDisc> gershgorin_discs(const SparseMatrix& a);

/// True when no disc contains the origin, i.e. |a_ii| > sum_{j!=i} |a_ij| for
/// every row. Such a matrix is nonsingular.
bool discs_exclude_zero(std::span<const GershgorinDisc> discs);

/// Positive diagonal, nonpositive off-diagonals, strict row dominance.
bool is_strictly_diagonally_dominant_m_matrix(const SparseMatrix& a);

double frobenius_norm(const SparseMatrix& a);
/// Maximum absolute column sum.
double norm1(const SparseMatrix& a);
/// Maximum absolute row sum.
double norm_inf(const SparseMatrix& a);

}  // namespace specoarse
