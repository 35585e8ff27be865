#pragma once

#include <vector>

#include "specoarse/coarsen.hpp"
#include "specoarse/dense_eig.hpp"
#include "specoarse/sparse_matrix.hpp"

namespace specoarse {

/// Per-index slack of the separation inequalities.
///
/// Eigen mode (k = coarse size): lower[i] = mu_i - lambda_i and
/// upper[i] = lambda_{n-k+i} - mu_i.
///
/// Singular mode (B = U^T A V of size p x q, r = (m - p) + (n - q)):
/// upper[i] = sigma_i(A) - sigma_i(B) and lower[i] = sigma_i(B) - sigma_{i+r}(A);
/// lower_vacuous[i] is set when i + r exceeds min(m, n).
struct InterlaceReport {
  SpectrumKind kind = SpectrumKind::Eigen;
  std::vector<double> fine;
  std::vector<double> coarse;
  std::vector<double> lower_slack;
  std::vector<double> upper_slack;
  std::vector<bool> lower_vacuous;
  double tolerance = 0.0;
  std::size_t violations = 0;

  bool ok() const noexcept { return violations == 0; }
  double min_slack() const noexcept;
};

/// Tolerance is 1e-9 ||A||_2.
InterlaceReport verify_interlacing(const SparseMatrix& a, const InterpolationOperator& p);

/// Same check against a precomputed fine spectrum (ascending).
InterlaceReport verify_interlacing(const Spectrum& fine, const DenseMatrix& coarse);

/// Same check when only the coarse eigenvalues are at hand.
InterlaceReport compare_eigenvalues(const Spectrum& fine, std::vector<double> coarse);

/// Tolerance is 1e-9 sigma_max(A).
InterlaceReport verify_svd_interlacing(const SparseMatrix& a, const InterpolationOperator& u,
                                       const InterpolationOperator& v);
InterlaceReport verify_svd_interlacing(const Spectrum& fine, std::size_t m, std::size_t n,
                                       const DenseMatrix& coarse);
/// Singular values of a p x q coarse matrix against those of the m x n fine one.
InterlaceReport compare_singular_values(const Spectrum& fine, std::size_t m, std::size_t n, std::size_t p,
                                        std::size_t q, std::vector<double> coarse);

}  // namespace specoarse
