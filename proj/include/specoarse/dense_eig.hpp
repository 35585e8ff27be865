#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "specoarse/dense_matrix.hpp"

namespace specoarse {

enum class SpectrumKind { Eigen, Singular };

/// Eigenvalues ascending, singular values descending.
struct Spectrum {
  std::vector<double> values;
  SpectrumKind kind = SpectrumKind::Eigen;
};

struct EigenDecomposition {
  Spectrum spectrum;
  /// Column j is the unit eigenvector for spectrum.values[j]; empty unless
  /// requested.
  DenseMatrix vectors;
  std::size_t sweeps = 0;
};

struct JacobiOptions {
  double relative_tol = 1e-13;
  std::size_t max_sweeps = 30;
};

/// Cyclic Jacobi. The input is symmetrized as (M + M^T)/2; an asymmetry above
/// 1e-12 ||M||_F is rejected with NotSymmetric. Hitting the sweep cap throws
/// NoConvergence.
EigenDecomposition sym_eigen(const DenseMatrix& m, bool want_vectors,
                             const JacobiOptions& options = {});
Spectrum sym_eigenvalues(const DenseMatrix& m);

/// Singular values via the augmented matrix [[0, M], [M^T, 0]], whose
/// eigenvalues are +-sigma_i padded with |m - n| zeros.
Spectrum dense_singular_values(const DenseMatrix& m);

/// (smallest, largest) eigenvalue.
std::pair<double, double> eig_extremes(const DenseMatrix& m);

/// max |lambda|, i.e. the spectral norm of a symmetric matrix.
double spectral_radius(const Spectrum& s);

}  // namespace specoarse
