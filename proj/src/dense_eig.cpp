#include "specoarse/dense_eig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "specoarse/error.hpp"

namespace specoarse {
namespace {

double off_diagonal_norm(const DenseMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.nrows(); ++i)
    for (std::size_t j = 0; j < a.ncols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

}  // namespace

EigenDecomposition sym_eigen(const DenseMatrix& m, bool want_vectors, const JacobiOptions& options) {
  if (!m.is_square()) throw Error(ErrorCode::NotSquare, "eigenvalues of a non-square matrix");
  const std::size_t n = m.nrows();
  const double norm = m.frobenius_norm();
  if (m.asymmetry() > 1e-12 * norm) {
    throw Error(ErrorCode::NotSymmetric, "dense eigensolver input is not symmetric");
  }

  DenseMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (m(i, j) + m(j, i));
  DenseMatrix v = want_vectors ? DenseMatrix::identity(n) : DenseMatrix();

  EigenDecomposition out;
  const double target = options.relative_tol * norm;
  bool converged = off_diagonal_norm(a) <= target;
  while (!converged) {
    if (out.sweeps == options.max_sweeps) {
      throw Error(ErrorCode::NoConvergence, "Jacobi hit the cap of " + std::to_string(options.max_sweeps) +
                                                " sweeps (n = " + std::to_string(n) + ")");
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = a(p, k) = c * akp - s * akq;
          a(k, q) = a(q, k) = s * akp + c * akq;
        }
        a(p, p) -= t * apq;
        a(q, q) += t * apq;
        a(p, q) = a(q, p) = 0.0;
        if (want_vectors) {
          for (std::size_t k = 0; k < n; ++k) {
            const double vkp = v(k, p);
            const double vkq = v(k, q);
            v(k, p) = c * vkp - s * vkq;
            v(k, q) = s * vkp + c * vkq;
          }
        }
      }
    }
    ++out.sweeps;
    converged = off_diagonal_norm(a) <= target;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });
  out.spectrum.kind = SpectrumKind::Eigen;
  out.spectrum.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.spectrum.values[i] = a(order[i], order[i]);
  if (want_vectors) {
    out.vectors = DenseMatrix(n, n);
    for (std::size_t col = 0; col < n; ++col)
      for (std::size_t k = 0; k < n; ++k) out.vectors(k, col) = v(k, order[col]);
  }
  return out;
}

Spectrum sym_eigenvalues(const DenseMatrix& m) { return sym_eigen(m, false).spectrum; }

Spectrum dense_singular_values(const DenseMatrix& m) {
  const std::size_t rows = m.nrows();
  const std::size_t cols = m.ncols();
  Spectrum out;
  out.kind = SpectrumKind::Singular;
  if (rows == 0 || cols == 0) return out;

  DenseMatrix aug(rows + cols, rows + cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      aug(i, rows + j) = m(i, j);
      aug(rows + j, i) = m(i, j);
    }
  const auto eig = sym_eigenvalues(aug).values;
  const std::size_t count = std::min(rows, cols);
  out.values.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.values.push_back(std::max(0.0, eig[eig.size() - 1 - i]));
  return out;
}

std::pair<double, double> eig_extremes(const DenseMatrix& m) {
  const auto values = sym_eigenvalues(m).values;
  if (values.empty()) throw Error(ErrorCode::InvalidArgument, "extremes of an empty matrix");
  return {values.front(), values.back()};
}

double spectral_radius(const Spectrum& s) {
  double r = 0.0;
  for (double v : s.values) r = std::max(r, std::abs(v));
  return r;
}

}  // namespace specoarse
