#pragma once

// Independent reference computations for the test suites. Nothing here calls
// into the library's eigensolver, LU or Galerkin kernels.

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "specoarse/aggregation.hpp"
#include "specoarse/dense_matrix.hpp"
#include "specoarse/sparse_matrix.hpp"

namespace oracle {

inline Eigen::MatrixXd to_eigen(const specoarse::DenseMatrix& m) {
  Eigen::MatrixXd e(m.nrows(), m.ncols());
  for (std::size_t i = 0; i < m.nrows(); ++i)
    for (std::size_t j = 0; j < m.ncols(); ++j) e(i, j) = m(i, j);
  return e;
}

inline Eigen::MatrixXd to_eigen(const specoarse::SparseMatrix& a) {
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(a.nrows(), a.ncols());
  for (std::size_t i = 0; i < a.nrows(); ++i)
    for (std::size_t p = a.row_ptr()[i]; p < a.row_ptr()[i + 1]; ++p) e(i, a.col_idx()[p]) = a.values()[p];
  return e;
}

/// Ascending eigenvalues of a symmetric matrix.
inline std::vector<double> eigenvalues(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  const auto& v = es.eigenvalues();
  return {v.data(), v.data() + v.size()};
}
inline std::vector<double> eigenvalues(const specoarse::DenseMatrix& m) { return eigenvalues(to_eigen(m)); }
inline std::vector<double> eigenvalues(const specoarse::SparseMatrix& a) { return eigenvalues(to_eigen(a)); }

/// Descending singular values.
inline std::vector<double> singular_values(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& v = svd.singularValues();
  return {v.data(), v.data() + v.size()};
}
inline std::vector<double> singular_values(const specoarse::DenseMatrix& m) { return singular_values(to_eigen(m)); }
inline std::vector<double> singular_values(const specoarse::SparseMatrix& a) { return singular_values(to_eigen(a)); }

inline bool cholesky_succeeds(const specoarse::SparseMatrix& a) {
  Eigen::LLT<Eigen::MatrixXd> llt(to_eigen(a));
  return llt.info() == Eigen::Success;
}

/// Eigenvalues of tridiag(-1, 2, -1) of order n: 2 - 2 cos(k pi / (n + 1)).
inline std::vector<double> laplacian_1d_eigenvalues(std::size_t n) {
  std::vector<double> out;
  for (std::size_t k = 1; k <= n; ++k)
    out.push_back(2.0 - 2.0 * std::cos(static_cast<double>(k) * std::numbers::pi / static_cast<double>(n + 1)));
  return out;
}

/// Plain triple loop y = A x over the dense form.
inline std::vector<double> dense_matvec(const Eigen::MatrixXd& a, const std::vector<double>& x) {
  std::vector<double> y(static_cast<std::size_t>(a.rows()), 0.0);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) y[static_cast<std::size_t>(i)] += a(i, j) * x[static_cast<std::size_t>(j)];
  return y;
}

/// Distance from v to the nearest element of `spectrum`.
inline double distance_to(const std::vector<double>& spectrum, double v) {
  double best = INFINITY;
  for (double s : spectrum) best = std::min(best, std::abs(s - v));
  return best;
}

inline double spectral_norm(const std::vector<double>& eig) {
  double r = 0.0;
  for (double v : eig) r = std::max(r, std::abs(v));
  return r;
}

/// Symmetric matrix with entries uniform in [-1, 1], dense pattern.
inline specoarse::SparseMatrix random_symmetric(std::size_t n, unsigned seed, double density = 1.0) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<specoarse::Triplet> t;
  for (std::size_t i = 0; i < n; ++i) {
    t.push_back({i, i, u(rng)});
    for (std::size_t j = i + 1; j < n; ++j) {
      if (coin(rng) > density) continue;
      const double v = u(rng);
      t.push_back({i, j, v});
      t.push_back({j, i, v});
    }
  }
  return specoarse::SparseMatrix::from_triplets(n, n, t);
}

inline specoarse::SparseMatrix random_dense(std::size_t m, std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  specoarse::DenseMatrix d(m, n);
  for (double& v : d.data()) v = u(rng);
  return specoarse::SparseMatrix::from_dense(d);
}

// All ways to split {0..5} into three pairs, as part arrays.
inline std::vector<specoarse::Partition> balanced_pairings() {
  std::vector<specoarse::Partition> out;
  for (std::size_t a = 1; a < 6; ++a) {
    std::vector<std::size_t> rest;
    for (std::size_t i = 1; i < 6; ++i)
      if (i != a) rest.push_back(i);
    for (std::size_t b = 1; b < 4; ++b) {
      std::vector<std::size_t> part(6);
      part[0] = part[a] = 0;
      part[rest[0]] = part[rest[b]] = 1;
      for (std::size_t t = 1; t < 4; ++t)
        if (t != b) part[rest[t]] = 2;
      out.emplace_back(part, 3);
    }
  }
  return out;
}

// Every partition of {0..5} into exactly three nonempty aggregates.
inline std::vector<specoarse::Partition> all_three_way() {
  std::vector<specoarse::Partition> out;
  std::vector<std::size_t> part(6, 0);
  for (std::size_t code = 0; code < 729; ++code) {
    std::size_t c = code;
    for (auto& v : part) {
      v = c % 3;
      c /= 3;
    }
    // canonical form: labels appear in order of first use
    std::size_t next = 0;
    bool canonical = true;
    for (auto v : part) {
      if (v > next) canonical = false;
      if (v == next) ++next;
    }
    if (canonical && next == 3) out.emplace_back(part, 3);
  }
  return out;
}

// Q diag(lambda) Q^T where the first three columns of Q are the normalized
// indicators of the aggregates {0,1}, {2,3}, {4,5}.
inline specoarse::SparseMatrix planted(const std::vector<double>& lambda, bool low) {
  Eigen::MatrixXd basis = Eigen::MatrixXd::Random(6, 6);
  for (int j = 0; j < 3; ++j) {
    basis.col(j).setZero();
    basis(2 * j, j) = basis(2 * j + 1, j) = 1.0 / std::sqrt(2.0);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis);
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::VectorXd d(6);
  // Columns 0..2 carry the three smallest (low) or largest values.
  for (int j = 0; j < 6; ++j) {
    const int idx = low ? j : (j + 3) % 6;
    d(j) = lambda[static_cast<std::size_t>(idx)];
  }
  Eigen::MatrixXd a = q * d.asDiagonal() * q.transpose();
  a = 0.5 * (a + a.transpose());
  specoarse::DenseMatrix m(6, 6);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) m(i, j) = a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return specoarse::SparseMatrix::from_dense(m);
}

}  // namespace oracle
