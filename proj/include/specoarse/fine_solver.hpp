#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "specoarse/sparse_matrix.hpp"

namespace specoarse {

struct ShiftResult {
  double value = 0.0;
  double shift = 0.0;
  /// ||A x - value x||_2 / (||A||_1 ||x||_2)
  double residual = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  std::optional<std::vector<double>> vector;
};

struct RefineOptions {
  double tol = 1e-10;
  std::size_t max_iters = 1000;
  std::uint64_t seed = 0;
  /// Re-factor once at the Rayleigh quotient after it settles.
  bool polish = true;
  bool keep_vector = false;
};

/// Shift-invert inverse iteration towards the eigenvalue of symmetric A
/// nearest mu. (A - mu I) is factored once; a numerically singular factor
/// (pivot < 1e-14 ||A||_1) means mu already is an eigenvalue estimate, and
/// the shift is nudged to mu (1 + sqrt(eps)) + sqrt(eps) before retrying.
///
/// Non-convergence is not an exception: the best iterate is returned with
/// converged = false.
ShiftResult eigen_near_shift(const SparseMatrix& a, double mu, const RefineOptions& options = {});

/// [[0, A], [A^T, 0]], symmetric of order m + n.
SparseMatrix augmented_operator(const SparseMatrix& a);

/// eigen_near_shift on the augmented operator at +sigma_shift; returns the
/// absolute value of the converged eigenvalue. For m != n the augmented
/// operator has |m - n| spurious zero eigenvalues; a converged vector whose
/// row and column halves are unbalanced belongs to that null space and is
/// reported as not converged.
ShiftResult singular_value_near_shift(const SparseMatrix& a, double sigma_shift,
                                      const RefineOptions& options = {});

}  // namespace specoarse
