#include "specoarse/fine_solver.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "specoarse/error.hpp"
#include "specoarse/rng.hpp"
#include "specoarse/shifted_lu.hpp"

namespace specoarse {
namespace {

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

const double kSqrtEps = std::sqrt(std::numeric_limits<double>::epsilon());

/// Factors A - shift I, nudging the shift once if the factor is singular.
std::unique_ptr<ShiftedFactorization> factor_with_retry(const SparseMatrix& a, double shift, double floor) {
  auto f = factorize_shifted(a, shift, floor);
  if (f->min_pivot() < floor) {
    f = factorize_shifted(a, shift * (1.0 + kSqrtEps) + kSqrtEps, floor);
  }
  return f;
}

}  // namespace

ShiftResult eigen_near_shift(const SparseMatrix& a, double mu, const RefineOptions& options) {
  if (!a.is_square()) throw Error(ErrorCode::NotSquare, "shift-invert needs a square matrix");
  if (!a.symmetric()) throw Error(ErrorCode::NotSymmetric, "shift-invert needs a symmetric matrix");
  if (!(options.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");

  const std::size_t n = a.nrows();
  ShiftResult best;
  best.shift = mu;
  best.residual = std::numeric_limits<double>::infinity();
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "shift-invert on an empty matrix");

  const double a_norm = norm1(a);
  const double scale = a_norm > 0.0 ? a_norm : 1.0;
  const double floor = 1e-14 * scale;

  auto factor = factor_with_retry(a, mu, floor);

  std::vector<double> x(n), y(n), ax(n);
  {
    Rng rng(options.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (double& v : x) v = unit(rng);
    double nx = norm2(x);
    if (nx == 0.0) {
      x[0] = 1.0;
      nx = 1.0;
    }
    for (double& v : x) v /= nx;
  }
  matvec(a, x, ax);
  double rho = dot(x, ax);
  bool polished = false;

  for (std::size_t it = 1; it <= options.max_iters; ++it) {
    y = x;
    factor->solve(y);
    const double ny = norm2(y);
    if (!(ny > 0.0) || !std::isfinite(ny)) break;
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / ny;

    matvec(a, x, ax);
    const double rho_new = dot(x, ax);
    double r2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = ax[i] - rho_new * x[i];
      r2 += d * d;
    }
    const double residual = std::sqrt(r2) / scale;

    if (residual < best.residual) {
      best.value = rho_new;
      best.residual = residual;
      best.iterations = it;
      if (options.keep_vector) best.vector = x;
    }
    if (residual <= options.tol) {
      best.converged = true;
      best.iterations = it;
      break;
    }
    if (options.polish && !polished && std::abs(rho_new - rho) <= options.tol * scale) {
      factor = factor_with_retry(a, rho_new, floor);
      polished = true;
    }
    rho = rho_new;
  }
  if (!best.converged) best.iterations = options.max_iters;
  return best;
}

SparseMatrix augmented_operator(const SparseMatrix& a) {
  const std::size_t m = a.nrows();
  const std::size_t n = a.ncols();
  const SparseMatrix at = a.transpose();
  std::vector<std::size_t> row_ptr(m + n + 1, 0);
  std::vector<std::size_t> col_idx;
  std::vector<double> values;
  col_idx.reserve(2 * a.nnz());
  values.reserve(2 * a.nnz());
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t p = a.row_ptr()[i]; p < a.row_ptr()[i + 1]; ++p) {
      col_idx.push_back(m + a.col_idx()[p]);
      values.push_back(a.values()[p]);
    }
    row_ptr[i + 1] = col_idx.size();
  }
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t p = at.row_ptr()[j]; p < at.row_ptr()[j + 1]; ++p) {
      col_idx.push_back(at.col_idx()[p]);
      values.push_back(at.values()[p]);
    }
    row_ptr[m + j + 1] = col_idx.size();
  }
  return SparseMatrix(m + n, m + n, std::move(row_ptr), std::move(col_idx), std::move(values));
}

ShiftResult singular_value_near_shift(const SparseMatrix& a, double sigma_shift, const RefineOptions& options) {
  if (!(sigma_shift >= 0.0)) throw Error(ErrorCode::InvalidArgument, "singular value shift must be >= 0");
  const SparseMatrix aug = augmented_operator(a);
  RefineOptions inner = options;
  inner.keep_vector = true;
  ShiftResult res = eigen_near_shift(aug, sigma_shift, inner);
  res.value = std::abs(res.value);

  const std::size_t m = a.nrows();
  if (m != a.ncols() && res.vector) {
    const auto& x = *res.vector;
    double top = 0.0, bottom = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) (i < m ? top : bottom) += x[i] * x[i];
    if (std::abs(top - bottom) > 0.5) res.converged = false;
  }
  if (!options.keep_vector) res.vector.reset();
  return res;
}

}  // namespace specoarse
