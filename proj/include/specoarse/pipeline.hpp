#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "specoarse/aggregation.hpp"
#include "specoarse/coarsen.hpp"
#include "specoarse/dense_eig.hpp"
#include "specoarse/fine_solver.hpp"
#include "specoarse/sparse_matrix.hpp"

namespace specoarse {

enum class PartitionerKind { StrongCoupling, Bfs, Random };

struct PartitionerSpec {
  PartitionerKind kind = PartitionerKind::Bfs;
  double beta = 0.25;
};

/// Parses `strong:<beta>`, `strong`, `bfs` or `random`.
PartitionerSpec parse_partitioner(const std::string& text);
std::string to_string(const PartitionerSpec& spec);

/// Which coarse eigenvalues become shifts.
enum class ShiftTarget { Smallest, Largest, Nearest };

struct SampleConfig {
  std::size_t samples = 1;        // J
  std::size_t per_sample = 1;     // k
  std::size_t n_aggregates = 1;   // N_c
  PartitionerSpec partitioner;
  bool normalized = true;
  std::uint64_t seed = 0;
  double tol = 1e-10;
  std::size_t max_iters = 1000;
  ShiftTarget target = ShiftTarget::Smallest;
  double target_point = 0.0;
  /// OpenMP threads for the sample loop; 0 means the runtime default.
  int workers = 1;
  /// When set, every sample uses this partition instead of drawing one, and
  /// n_aggregates is ignored.
  std::optional<Partition> partition;

  /// Throws InvalidArgument unless J >= 1 and 1 <= k <= N_c <= n.
  void validate(std::size_t n) const;
};

/// N_c = ceil(N / ratio), at least 1.
std::size_t default_aggregate_count(std::size_t n, double ratio = 10.0);

/// Partition drawn for one sample from its derived seed. Strong coupling has
/// no aggregate-count input; its randomness comes from a seeded relabelling of the nodes before aggregation.
Partition sample_partition(const SparseMatrix& a, const PartitionerSpec& spec,
                           std::size_t n_aggregates, std::uint64_t sample_seed);

struct Provenance {
  std::size_t sample = 0;
  double shift = 0.0;
  double residual = 0.0;
  std::size_t iterations = 0;
};

struct ShiftOutcome {
  double shift = 0.0;
  double value = 0.0;
  double residual = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Everything one coarse-grid sample produced.
struct SampleTrace {
  std::size_t sample = 0;
  std::uint64_t seed = 0;
  std::size_t n_aggregates = 0;
  std::size_t n_col_aggregates = 0;  // singular-value runs only
  std::vector<double> coarse_values;
  std::vector<ShiftOutcome> refinements;
};

struct SpectrumEstimate {
  SpectrumKind kind = SpectrumKind::Eigen;
  /// Ascending for eigenvalues, descending for singular values.
  std::vector<double> values;
  /// provenance[i] lists every refinement that landed on values[i].
  std::vector<std::vector<Provenance>> provenance;
  std::size_t rejected = 0;
  std::vector<SampleTrace> samples;
};

struct DedupOptions {
  double relative = 1e-8;
  double absolute = 0.0;
};

struct Candidate {
  double value = 0.0;
  Provenance origin;
};

/// Collapses candidates whose values agree within
/// max(relative * max(|a|, |b|), absolute). The representative of a cluster is
/// the candidate with the smallest residual (ties: sample, then shift).
SpectrumEstimate deduplicate(std::vector<Candidate> candidates, SpectrumKind kind,
                             const DedupOptions& options);

/// Sample J coarse grids, refine k coarse eigenvalues of each on the fine
/// grid and gather the converged values. Throws EmptyEstimate when no
/// refinement converges.
SpectrumEstimate estimate_eigenvalues(const SparseMatrix& a, const SampleConfig& cfg);

/// Two-sided variant: independent random row and column partitions give U, V
/// and B = U^T A V; the k largest singular values of B are refined. The row
/// and column aggregate counts are min(N_c, m) and min(N_c, n).
SpectrumEstimate estimate_singular_values(const SparseMatrix& a, const SampleConfig& cfg);

struct ExtremeConfig {
  std::size_t samples = 1;
  std::size_t n_aggregates = 1;
  PartitionerSpec partitioner;
  bool normalized = true;
  std::uint64_t seed = 0;
  /// Polish both bounds on the fine grid.
  bool refine = false;
  double tol = 1e-10;
  std::size_t max_iters = 1000;
  int workers = 1;
};

struct ExtremeEstimate {
  double min = 0.0;
  double max = 0.0;
  std::vector<double> sample_min;
  std::vector<double> sample_max;
  /// Set only when ExtremeConfig::refine is on.
  std::optional<ShiftResult> refined_min;
  std::optional<ShiftResult> refined_max;
};

ExtremeEstimate extreme_eigenvalues(const SparseMatrix& a, const ExtremeConfig& cfg);
ExtremeEstimate extreme_singular_values(const SparseMatrix& a, const ExtremeConfig& cfg);

}  // namespace specoarse
