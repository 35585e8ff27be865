#include "specoarse/sparse_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "specoarse/error.hpp"

namespace specoarse {

SparseMatrix::SparseMatrix(std::size_t nrows, std::size_t ncols, std::vector<std::size_t> row_ptr,
                           std::vector<std::size_t> col_idx, std::vector<double> values)
    : nrows_(nrows),
      ncols_(ncols),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
  validate();
  symmetric_ = check_symmetric();
}

SparseMatrix SparseMatrix::from_triplets(std::size_t nrows, std::size_t ncols,
                                         std::span<const Triplet> entries) {
  std::vector<std::size_t> counts(nrows + 1, 0);
  for (const auto& t : entries) {
    if (t.row >= nrows || t.col >= ncols) {
      throw Error(ErrorCode::IndexOutOfRange,
                  "triplet (" + std::to_string(t.row) + ", " + std::to_string(t.col) +
                      ") outside " + std::to_string(nrows) + "x" + std::to_string(ncols));
    }
    ++counts[t.row + 1];
  }
  std::partial_sum(counts.begin(), counts.end(), counts.begin());

  // Bucket by row, then sort and merge each row.
  std::vector<std::pair<std::size_t, double>> bucket(entries.size());
  std::vector<std::size_t> fill(counts.begin(), counts.end() - 1);
  for (const auto& t : entries) bucket[fill[t.row]++] = {t.col, t.value};

  std::vector<std::size_t> row_ptr(nrows + 1, 0);
  std::vector<std::size_t> col_idx;
  std::vector<double> values;
  col_idx.reserve(entries.size());
  values.reserve(entries.size());
  for (std::size_t i = 0; i < nrows; ++i) {
    auto first = bucket.begin() + static_cast<std::ptrdiff_t>(counts[i]);
    auto last = bucket.begin() + static_cast<std::ptrdiff_t>(counts[i + 1]);
    std::stable_sort(first, last, [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto it = first; it != last; ++it) {
      if (!col_idx.empty() && values.size() > row_ptr[i] && col_idx.back() == it->first) {
        values.back() += it->second;
      } else {
        col_idx.push_back(it->first);
        values.push_back(it->second);
      }
    }
    row_ptr[i + 1] = col_idx.size();
  }
  return SparseMatrix(nrows, ncols, std::move(row_ptr), std::move(col_idx), std::move(values));
}

SparseMatrix SparseMatrix::from_dense(const DenseMatrix& m) {
  std::vector<std::size_t> row_ptr(m.nrows() + 1, 0);
  std::vector<std::size_t> col_idx;
  std::vector<double> values;
  for (std::size_t i = 0; i < m.nrows(); ++i) {
    for (std::size_t j = 0; j < m.ncols(); ++j) {
      if (m(i, j) != 0.0) {
        col_idx.push_back(j);
        values.push_back(m(i, j));
      }
    }
    row_ptr[i + 1] = col_idx.size();
  }
  return SparseMatrix(m.nrows(), m.ncols(), std::move(row_ptr), std::move(col_idx),
                      std::move(values));
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  std::vector<std::size_t> row_ptr(n + 1);
  std::vector<std::size_t> col_idx(n);
  std::iota(row_ptr.begin(), row_ptr.end(), std::size_t{0});
  std::iota(col_idx.begin(), col_idx.end(), std::size_t{0});
  return SparseMatrix(n, n, std::move(row_ptr), std::move(col_idx), std::vector<double>(n, 1.0));
}

double SparseMatrix::at(std::size_t i, std::size_t j) const {
  if (i >= nrows_ || j >= ncols_) {
    throw Error(ErrorCode::IndexOutOfRange, "entry (" + std::to_string(i) + ", " +
                                                std::to_string(j) + ") out of range");
  }
  auto first = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
  auto last = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
  auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return 0.0;
  return values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

std::size_t SparseMatrix::bandwidth() const noexcept {
  std::size_t bw = 0;
  for (std::size_t i = 0; i < nrows_; ++i) {
    for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      const std::size_t j = col_idx_[p];
      bw = std::max(bw, i > j ? i - j : j - i);
    }
  }
  return bw;
}

void SparseMatrix::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidArgument, "CSR: " + what); };
  if (row_ptr_.size() != nrows_ + 1) fail("row_ptr length != nrows + 1");
  if (row_ptr_.front() != 0) fail("row_ptr[0] != 0");
  if (row_ptr_.back() != col_idx_.size()) fail("row_ptr[nrows] != nnz");
  if (col_idx_.size() != values_.size()) fail("col_idx and values lengths differ");
  for (std::size_t i = 0; i < nrows_; ++i) {
    if (row_ptr_[i] > row_ptr_[i + 1]) fail("row_ptr decreases at row " + std::to_string(i));
    for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      if (col_idx_[p] >= ncols_) fail("column index out of range in row " + std::to_string(i));
      if (p > row_ptr_[i] && col_idx_[p] <= col_idx_[p - 1]) {
        fail("columns not strictly increasing in row " + std::to_string(i));
      }
    }
  }
}

bool SparseMatrix::check_symmetric() const {
  if (nrows_ != ncols_) return false;
  for (std::size_t i = 0; i < nrows_; ++i) {
    for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      const std::size_t j = col_idx_[p];
      if (j == i) continue;
      auto first = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[j]);
      auto last = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[j + 1]);
      auto it = std::lower_bound(first, last, i);
      if (it == last || *it != i) return false;
      if (values_[static_cast<std::size_t>(it - col_idx_.begin())] != values_[p]) return false;
    }
  }
  return true;
}

DenseMatrix SparseMatrix::to_dense() const {
  DenseMatrix d(nrows_, ncols_);
  for (std::size_t i = 0; i < nrows_; ++i)
    for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) d(i, col_idx_[p]) = values_[p];
  return d;
}

SparseMatrix SparseMatrix::transpose() const {
  std::vector<std::size_t> row_ptr(ncols_ + 1, 0);
  for (std::size_t j : col_idx_) ++row_ptr[j + 1];
  std::partial_sum(row_ptr.begin(), row_ptr.end(), row_ptr.begin());
  std::vector<std::size_t> col_idx(nnz());
  std::vector<double> values(nnz());
  std::vector<std::size_t> fill(row_ptr.begin(), row_ptr.end() - 1);
  // Rows visited in increasing order keep the transposed rows sorted.
  for (std::size_t i = 0; i < nrows_; ++i) {
    for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      const std::size_t dst = fill[col_idx_[p]]++;
      col_idx[dst] = i;
      values[dst] = values_[p];
    }
  }
  return SparseMatrix(ncols_, nrows_, std::move(row_ptr), std::move(col_idx), std::move(values));
}

namespace {

void check_matvec_dims(const SparseMatrix& a, std::span<const double> x, std::span<double> y) {
  if (x.size() != a.ncols() || y.size() != a.nrows()) {
    throw Error(ErrorCode::DimensionMismatch,
                "matvec: A is " + std::to_string(a.nrows()) + "x" + std::to_string(a.ncols()) +
                    ", x has " + std::to_string(x.size()) + ", y has " + std::to_string(y.size()));
  }
  if (!x.empty() && !y.empty() && x.data() < y.data() + y.size() && y.data() < x.data() + x.size()) {
    throw Error(ErrorCode::InvalidArgument, "matvec: x and y overlap");
  }
}

inline double row_dot(const SparseMatrix& a, std::size_t i, std::span<const double> x) {
  const auto rp = a.row_ptr();
  const auto ci = a.col_idx();
  const auto v = a.values();
  double s = 0.0;
  for (std::size_t p = rp[i]; p < rp[i + 1]; ++p) s += v[p] * x[ci[p]];
  return s;
}

}  // namespace

namespace serial {

void matvec(const SparseMatrix& a, std::span<const double> x, std::span<double> y) {
  check_matvec_dims(a, x, y);
  for (std::size_t i = 0; i < a.nrows(); ++i) y[i] = row_dot(a, i, x);
}

}  // namespace serial

void matvec(const SparseMatrix& a, std::span<const double> x, std::span<double> y) {
  check_matvec_dims(a, x, y);
  const auto n = static_cast<std::ptrdiff_t>(a.nrows());
#pragma omp parallel for schedule(static) if (a.nnz() > 20000)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    y[static_cast<std::size_t>(i)] = row_dot(a, static_cast<std::size_t>(i), x);
  }
}

std::vector<double> matvec(const SparseMatrix& a, std::span<const double> x) {
  std::vector<double> y(a.nrows());
  matvec(a, x, y);
  return y;
}

double trace(const SparseMatrix& a) {
  if (!a.is_square()) throw Error(ErrorCode::NotSquare, "trace of a non-square matrix");
  double s = 0.0;
  for (std::size_t i = 0; i < a.nrows(); ++i) s += a.at(i, i);
  return s;
}

std::vector<GershgorinDisc> gershgorin_discs(const SparseMatrix& a) {
  if (!a.is_square()) throw Error(ErrorCode::NotSquare, "Gershgorin discs need a square matrix");
  const auto rp = a.row_ptr();
  const auto ci = a.col_idx();
  const auto v = a.values();
  std::vector<GershgorinDisc> discs(a.nrows(), GershgorinDisc{0.0, 0.0});
  for (std::size_t i = 0; i < a.nrows(); ++i) {
    for (std::size_t p = rp[i]; p < rp[i + 1]; ++p) {
      if (ci[p] == i) {
        discs[i].center = v[p];
      } else {
        discs[i].radius += std::abs(v[p]);
      }
    }
  }
  return discs;
}

bool discs_exclude_zero(std::span<const GershgorinDisc> discs) {
  return std::all_of(discs.begin(), discs.end(),
                     [](const GershgorinDisc& d) { return std::abs(d.center) > d.radius; });
}

bool is_strictly_diagonally_dominant_m_matrix(const SparseMatrix& a) {
  if (!a.is_square()) return false;
  const auto rp = a.row_ptr();
  const auto ci = a.col_idx();
  const auto v = a.values();
  for (std::size_t i = 0; i < a.nrows(); ++i) {
    double diag = 0.0;
    double off = 0.0;
    for (std::size_t p = rp[i]; p < rp[i + 1]; ++p) {
      if (ci[p] == i) {
        diag = v[p];
      } else {
        if (v[p] > 0.0) return false;
        off += -v[p];
      }
    }
    if (!(diag > off)) return false;
  }
  return true;
}

double frobenius_norm(const SparseMatrix& a) {
  double s = 0.0;
  for (double v : a.values()) s += v * v;
  return std::sqrt(s);
}

double norm1(const SparseMatrix& a) {
  std::vector<double> col(a.ncols(), 0.0);
  const auto ci = a.col_idx();
  const auto v = a.values();
  for (std::size_t p = 0; p < a.nnz(); ++p) col[ci[p]] += std::abs(v[p]);
  return col.empty() ? 0.0 : *std::max_element(col.begin(), col.end());
}

double norm_inf(const SparseMatrix& a) {
  const auto rp = a.row_ptr();
  const auto v = a.values();
  double best = 0.0;
  for (std::size_t i = 0; i < a.nrows(); ++i) {
    double s = 0.0;
    for (std::size_t p = rp[i]; p < rp[i + 1]; ++p) s += std::abs(v[p]);
    best = std::max(best, s);
  }
  return best;
}

}  // namespace specoarse
