#include "specoarse/verify.hpp"

#include <algorithm>
#include <functional>
#include <limits>

#include "specoarse/error.hpp"

namespace specoarse {

double InterlaceReport::min_slack() const noexcept {
  double s = std::numeric_limits<double>::infinity();
  for (double v : upper_slack) s = std::min(s, v);
  for (std::size_t i = 0; i < lower_slack.size(); ++i)
    if (!lower_vacuous[i]) s = std::min(s, lower_slack[i]);
  return s;
}

InterlaceReport verify_interlacing(const Spectrum& fine, const DenseMatrix& coarse) {
  if (!coarse.is_square()) throw Error(ErrorCode::NotSquare, "coarse matrix must be square");
  return compare_eigenvalues(fine, sym_eigenvalues(coarse).values);
}

InterlaceReport compare_eigenvalues(const Spectrum& fine, std::vector<double> coarse) {
  const std::size_t n = fine.values.size();
  const std::size_t k = coarse.size();
  if (k > n) throw Error(ErrorCode::DimensionMismatch, "coarse spectrum longer than the fine one");
  std::sort(coarse.begin(), coarse.end());
  InterlaceReport rep;
  rep.kind = SpectrumKind::Eigen;
  rep.fine = fine.values;
  rep.coarse = std::move(coarse);
  rep.tolerance = 1e-9 * spectral_radius(fine);
  rep.lower_slack.resize(k);
  rep.upper_slack.resize(k);
  rep.lower_vacuous.assign(k, false);
  for (std::size_t i = 0; i < k; ++i) {
    rep.lower_slack[i] = rep.coarse[i] - rep.fine[i];
    rep.upper_slack[i] = rep.fine[n - k + i] - rep.coarse[i];
    if (rep.lower_slack[i] < -rep.tolerance) ++rep.violations;
    if (rep.upper_slack[i] < -rep.tolerance) ++rep.violations;
  }
  return rep;
}

InterlaceReport verify_interlacing(const SparseMatrix& a, const InterpolationOperator& p) {
  if (!p.normalized()) {
    throw Error(ErrorCode::RequiresNormalized, "interlacing holds only for P with orthonormal columns");
  }
  return verify_interlacing(sym_eigenvalues(a.to_dense()), galerkin_product(a, p));
}

InterlaceReport verify_svd_interlacing(const Spectrum& fine, std::size_t m, std::size_t n,
                                       const DenseMatrix& coarse) {
  return compare_singular_values(fine, m, n, coarse.nrows(), coarse.ncols(), dense_singular_values(coarse).values);
}

InterlaceReport compare_singular_values(const Spectrum& fine, std::size_t m, std::size_t n, std::size_t p,
                                        std::size_t q, std::vector<double> coarse) {
  if (p > m || q > n || coarse.size() > std::min(p, q)) {
    throw Error(ErrorCode::DimensionMismatch, "coarse matrix larger than the fine one");
  }
  std::sort(coarse.begin(), coarse.end(), std::greater<>());
  InterlaceReport rep;
  rep.kind = SpectrumKind::Singular;
  rep.fine = fine.values;
  rep.coarse = std::move(coarse);
  rep.tolerance = 1e-9 * spectral_radius(fine);
  const std::size_t r = (m - p) + (n - q);
  const std::size_t full = std::min(m, n);
  const std::size_t count = rep.coarse.size();
  rep.lower_slack.assign(count, 0.0);
  rep.upper_slack.resize(count);
  rep.lower_vacuous.assign(count, false);
  for (std::size_t i = 0; i < count; ++i) {
    rep.upper_slack[i] = rep.fine[i] - rep.coarse[i];
    if (rep.upper_slack[i] < -rep.tolerance) ++rep.violations;
    if (i + r >= full) {
      rep.lower_vacuous[i] = true;
      continue;
    }
    rep.lower_slack[i] = rep.coarse[i] - rep.fine[i + r];
    if (rep.lower_slack[i] < -rep.tolerance) ++rep.violations;
  }
  return rep;
}

InterlaceReport verify_svd_interlacing(const SparseMatrix& a, const InterpolationOperator& u,
                                       const InterpolationOperator& v) {
  return verify_svd_interlacing(dense_singular_values(a.to_dense()), a.nrows(), a.ncols(),
                                two_sided_product(a, u, v));
}

}  // namespace specoarse
