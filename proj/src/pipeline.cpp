#include "specoarse/pipeline.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <random>
#include <sstream>

#include "specoarse/error.hpp"
#include "specoarse/fine_solver.hpp"
#include "specoarse/rng.hpp"

namespace specoarse {

PartitionerSpec parse_partitioner(const std::string& text) {
  PartitionerSpec spec;
  if (text == "bfs") {
    spec.kind = PartitionerKind::Bfs;
  } else if (text == "random") {
    spec.kind = PartitionerKind::Random;
  } else if (text == "strong" || text.rfind("strong:", 0) == 0) {
    spec.kind = PartitionerKind::StrongCoupling;
    if (text.size() > 7) {
      std::istringstream in(text.substr(7));
      double beta = -1.0;
      if (!(in >> beta) || !in.eof() || beta < 0.0 || beta > 1.0) {
        throw Error(ErrorCode::InvalidArgument, "strong coupling threshold must be a number in [0, 1]: '" + text + "'");
      }
      spec.beta = beta;
    }
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown partitioner '" + text + "' (strong[:beta] | bfs | random)");
  }
  return spec;
}

std::string to_string(const PartitionerSpec& spec) {
  switch (spec.kind) {
    case PartitionerKind::Bfs: return "bfs";
    case PartitionerKind::Random: return "random";
    case PartitionerKind::StrongCoupling: {
      std::ostringstream out;
      out.precision(17);
      out << "strong:" << spec.beta;
      return out.str();
    }
  }
  return "unknown";
}

void SampleConfig::validate(std::size_t n) const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); };
  if (samples < 1) fail("sample count J must be at least 1");
  if (per_sample < 1) fail("values per sample k must be at least 1");
  if (partition) {
    if (partition->size() != n) {
      fail("fixed partition covers " + std::to_string(partition->size()) + " nodes, matrix has " +
           std::to_string(n));
    }
    if (partition->n_aggregates() < per_sample) {
      fail("values per sample k exceeds the fixed partition's aggregate count");
    }
  } else {
    if (n_aggregates < per_sample) fail("values per sample k exceeds the coarse size N_c");
    if (n_aggregates > n) fail("coarse size N_c exceeds the matrix size");
  }
  if (!(tol > 0.0)) fail("tolerance must be positive");
  if (max_iters < 1) fail("max_iters must be at least 1");
}

std::size_t default_aggregate_count(std::size_t n, double ratio) {
  const auto nc = static_cast<std::size_t>(std::ceil(static_cast<double>(n) / ratio));
  return std::clamp<std::size_t>(nc, 1, std::max<std::size_t>(n, 1));
}

Partition sample_partition(const SparseMatrix& a, const PartitionerSpec& spec, std::size_t n_aggregates,
                           std::uint64_t sample_seed) {
  switch (spec.kind) {
    case PartitionerKind::Random:
      return random_partition(a.nrows(), n_aggregates, sample_seed);
    case PartitionerKind::Bfs:
      return bfs_graph_partition(a, n_aggregates, sample_seed);
    case PartitionerKind::StrongCoupling:
      break;
  }

  // Relabel node i as perm[i], aggregate, then map back. Aggregate ids are
  // renumbered by first appearance in the original ordering.
  const std::size_t n = a.nrows();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(sample_seed);
  std::shuffle(perm.begin(), perm.end(), rng);

  std::vector<Triplet> t;
  t.reserve(a.nnz());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t p = a.row_ptr()[i]; p < a.row_ptr()[i + 1]; ++p)
      t.push_back({perm[i], perm[a.col_idx()[p]], a.values()[p]});
  const SparseMatrix permuted = SparseMatrix::from_triplets(n, n, t);
  const Partition inner = strong_coupling_aggregation(permuted, spec.beta);

  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> relabel(inner.n_aggregates(), kNone);
  std::vector<std::size_t> part(n);
  std::size_t next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t& id = relabel[inner[perm[i]]];
    if (id == kNone) id = next++;
    part[i] = id;
  }
  return Partition(std::move(part), inner.n_aggregates());
}

SpectrumEstimate deduplicate(std::vector<Candidate> candidates, SpectrumKind kind, const DedupOptions& options) {
  auto by_value = [](const Candidate& x, const Candidate& y) {
    if (x.value != y.value) return x.value < y.value;
    if (x.origin.sample != y.origin.sample) return x.origin.sample < y.origin.sample;
    return x.origin.shift < y.origin.shift;
  };
  auto better = [](const Provenance& x, const Provenance& y) {
    if (x.residual != y.residual) return x.residual < y.residual;
    if (x.sample != y.sample) return x.sample < y.sample;
    return x.shift < y.shift;
  };
  auto close = [&](double x, double y) {
    return std::abs(x - y) <= std::max(options.relative * std::max(std::abs(x), std::abs(y)), options.absolute);
  };
  std::sort(candidates.begin(), candidates.end(), by_value);

  struct Cluster {
    double first;
    Candidate rep;
    std::vector<Provenance> members;
  };
  std::vector<Cluster> clusters;
  for (const auto& c : candidates) {
    if (!clusters.empty() && close(clusters.back().first, c.value)) {
      Cluster& cl = clusters.back();
      cl.members.push_back(c.origin);
      if (better(c.origin, cl.rep.origin)) cl.rep = c;
    } else {
      clusters.push_back({c.value, c, {c.origin}});
    }
  }
  // A representative can drift towards its neighbour; merge until the kept
  // values are pairwise separated.
  bool merged = true;
  while (merged && clusters.size() > 1) {
    merged = false;
    std::vector<Cluster> next;
    for (auto& cl : clusters) {
      if (!next.empty() && close(next.back().rep.value, cl.rep.value)) {
        Cluster& keep = next.back();
        keep.members.insert(keep.members.end(), cl.members.begin(), cl.members.end());
        if (better(cl.rep.origin, keep.rep.origin)) keep.rep = cl.rep;
        merged = true;
      } else {
        next.push_back(std::move(cl));
      }
    }
    clusters = std::move(next);
  }

  SpectrumEstimate out;
  out.kind = kind;
  for (auto& cl : clusters) {
    std::sort(cl.members.begin(), cl.members.end(), [](const Provenance& x, const Provenance& y) {
      if (x.sample != y.sample) return x.sample < y.sample;
      if (x.shift != y.shift) return x.shift < y.shift;
      return x.residual < y.residual;
    });
    out.values.push_back(cl.rep.value);
    out.provenance.push_back(std::move(cl.members));
  }
  if (kind == SpectrumKind::Singular) {
    std::reverse(out.values.begin(), out.values.end());
    std::reverse(out.provenance.begin(), out.provenance.end());
  }
  return out;
}

namespace {

int resolve_workers(int workers) { return workers > 0 ? workers : omp_get_max_threads(); }

/// Runs body(s) for every sample on a team of `workers` threads. Exceptions
/// are captured per sample and the one from the lowest sample index is
/// rethrown, so failures do not depend on scheduling either.
template <typename Body>
void for_each_sample(std::size_t count, int workers, Body&& body) {
  std::vector<std::exception_ptr> errors(count);
  const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic, 1) num_threads(resolve_workers(workers))
  for (std::ptrdiff_t s = 0; s < n; ++s) {
    try {
      body(static_cast<std::size_t>(s));
    } catch (...) {
      errors[static_cast<std::size_t>(s)] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::vector<double> select_shifts(const std::vector<double>& coarse, std::size_t k, ShiftTarget target,
                                  double point) {
  k = std::min(k, coarse.size());
  switch (target) {
    case ShiftTarget::Smallest:
      return {coarse.begin(), coarse.begin() + static_cast<std::ptrdiff_t>(k)};
    case ShiftTarget::Largest:
      return {coarse.end() - static_cast<std::ptrdiff_t>(k), coarse.end()};
    case ShiftTarget::Nearest: {
      std::vector<double> sorted = coarse;
      std::stable_sort(sorted.begin(), sorted.end(),
                       [&](double x, double y) { return std::abs(x - point) < std::abs(y - point); });
      sorted.resize(k);
      std::sort(sorted.begin(), sorted.end());
      return sorted;
    }
  }
  return {};
}

void require_symmetric(const SparseMatrix& a) {
  if (!a.is_square()) throw Error(ErrorCode::NotSquare, "eigenvalue estimation needs a square matrix");
  if (!a.symmetric()) throw Error(ErrorCode::NotSymmetric, "eigenvalue estimation needs a symmetric matrix");
}

SpectrumEstimate gather(std::vector<SampleTrace> traces, SpectrumKind kind, double a_norm) {
  std::vector<Candidate> candidates;
  std::size_t rejected = 0;
  for (const auto& tr : traces) {
    for (const auto& r : tr.refinements) {
      if (r.converged) {
        candidates.push_back({r.value, Provenance{tr.sample, r.shift, r.residual, r.iterations}});
      } else {
        ++rejected;
      }
    }
  }
  if (candidates.empty()) {
    throw Error(ErrorCode::EmptyEstimate,
                "none of the " + std::to_string(rejected) + " fine-grid refinements converged");
  }
  SpectrumEstimate est = deduplicate(std::move(candidates), kind, DedupOptions{1e-8, 1e-12 * a_norm});
  est.rejected = rejected;
  est.samples = std::move(traces);
  return est;
}

constexpr std::uint64_t kRowStream = 0x524f57;  // "ROW"
constexpr std::uint64_t kColStream = 0x434f4c;  // "COL"

}  // namespace

SpectrumEstimate estimate_eigenvalues(const SparseMatrix& a, const SampleConfig& cfg) {
  require_symmetric(a);
  cfg.validate(a.nrows());

  std::vector<SampleTrace> traces(cfg.samples);
  for_each_sample(cfg.samples, cfg.workers, [&](std::size_t s) {
    SampleTrace& tr = traces[s];
    tr.sample = s;
    tr.seed = derive_seed(cfg.seed, s);
    const Partition part =
        cfg.partition ? *cfg.partition : sample_partition(a, cfg.partitioner, cfg.n_aggregates, tr.seed);
    tr.n_aggregates = part.n_aggregates();
    const InterpolationOperator p = build_interpolation(part, cfg.normalized);
    tr.coarse_values = sym_eigenvalues(galerkin_product(a, p)).values;

    const auto shifts = select_shifts(tr.coarse_values, cfg.per_sample, cfg.target, cfg.target_point);
    for (std::size_t j = 0; j < shifts.size(); ++j) {
      RefineOptions opts;
      opts.tol = cfg.tol;
      opts.max_iters = cfg.max_iters;
      opts.seed = derive_seed(tr.seed, j);
      const ShiftResult r = eigen_near_shift(a, shifts[j], opts);
      tr.refinements.push_back({shifts[j], r.value, r.residual, r.iterations, r.converged});
    }
  });
  return gather(std::move(traces), SpectrumKind::Eigen, norm1(a));
}

SpectrumEstimate estimate_singular_values(const SparseMatrix& a, const SampleConfig& cfg) {
  const std::size_t m = a.nrows();
  const std::size_t n = a.ncols();
  if (m == 0 || n == 0) throw Error(ErrorCode::InvalidArgument, "singular values of an empty matrix");
  if (cfg.partitioner.kind != PartitionerKind::Random) {
    throw Error(ErrorCode::InvalidArgument, "singular value estimation uses random clustering only");
  }
  if (!cfg.normalized) {
    throw Error(ErrorCode::RequiresNormalized, "U^T A V needs column-normalized U and V");
  }
  if (cfg.samples < 1) throw Error(ErrorCode::InvalidArgument, "sample count J must be at least 1");
  if (cfg.n_aggregates < 1) throw Error(ErrorCode::InvalidArgument, "coarse size N_c must be at least 1");
  const std::size_t p = std::min(cfg.n_aggregates, m);
  const std::size_t q = std::min(cfg.n_aggregates, n);
  if (cfg.per_sample < 1 || cfg.per_sample > std::min(p, q)) {
    throw Error(ErrorCode::InvalidArgument, "values per sample k must lie in [1, min(p, q)] = [1, " +
                                                std::to_string(std::min(p, q)) + "]");
  }
  if (!(cfg.tol > 0.0) || cfg.max_iters < 1) throw Error(ErrorCode::InvalidArgument, "bad refinement controls");

  std::vector<SampleTrace> traces(cfg.samples);
  for_each_sample(cfg.samples, cfg.workers, [&](std::size_t s) {
    SampleTrace& tr = traces[s];
    tr.sample = s;
    tr.seed = derive_seed(cfg.seed, s);
    const auto u = build_interpolation(random_partition(m, p, derive_seed(tr.seed, kRowStream)), true);
    const auto v = build_interpolation(random_partition(n, q, derive_seed(tr.seed, kColStream)), true);
    tr.n_aggregates = p;
    tr.n_col_aggregates = q;
    tr.coarse_values = dense_singular_values(two_sided_product(a, u, v)).values;

    const std::size_t k = std::min(cfg.per_sample, tr.coarse_values.size());
    for (std::size_t j = 0; j < k; ++j) {
      RefineOptions opts;
      opts.tol = cfg.tol;
      opts.max_iters = cfg.max_iters;
      opts.seed = derive_seed(tr.seed, j);
      const double shift = tr.coarse_values[j];
      const ShiftResult r = singular_value_near_shift(a, shift, opts);
      tr.refinements.push_back({shift, r.value, r.residual, r.iterations, r.converged});
    }
  });
  return gather(std::move(traces), SpectrumKind::Singular, std::max(norm1(a), norm_inf(a)));
}

ExtremeEstimate extreme_eigenvalues(const SparseMatrix& a, const ExtremeConfig& cfg) {
  require_symmetric(a);
  if (cfg.samples < 1) throw Error(ErrorCode::InvalidArgument, "sample count J must be at least 1");
  if (cfg.n_aggregates < 1 || cfg.n_aggregates > a.nrows()) {
    throw Error(ErrorCode::InvalidArgument, "coarse size N_c must lie in [1, N]");
  }

  ExtremeEstimate out;
  out.sample_min.resize(cfg.samples);
  out.sample_max.resize(cfg.samples);
  for_each_sample(cfg.samples, cfg.workers, [&](std::size_t s) {
    const auto seed = derive_seed(cfg.seed, s);
    const Partition part = sample_partition(a, cfg.partitioner, cfg.n_aggregates, seed);
    const auto [lo, hi] = eig_extremes(galerkin_product(a, build_interpolation(part, cfg.normalized)));
    out.sample_min[s] = lo;
    out.sample_max[s] = hi;
  });
  out.min = *std::min_element(out.sample_min.begin(), out.sample_min.end());
  out.max = *std::max_element(out.sample_max.begin(), out.sample_max.end());

  if (cfg.refine) {
    RefineOptions opts;
    opts.tol = cfg.tol;
    opts.max_iters = cfg.max_iters;
    opts.seed = derive_seed(cfg.seed, cfg.samples);
    out.refined_min = eigen_near_shift(a, out.min, opts);
    out.refined_max = eigen_near_shift(a, out.max, opts);
  }
  return out;
}

ExtremeEstimate extreme_singular_values(const SparseMatrix& a, const ExtremeConfig& cfg) {
  const std::size_t m = a.nrows();
  const std::size_t n = a.ncols();
  if (m == 0 || n == 0) throw Error(ErrorCode::InvalidArgument, "singular values of an empty matrix");
  if (cfg.samples < 1) throw Error(ErrorCode::InvalidArgument, "sample count J must be at least 1");
  if (cfg.n_aggregates < 1) throw Error(ErrorCode::InvalidArgument, "coarse size N_c must be at least 1");
  if (!cfg.normalized) throw Error(ErrorCode::RequiresNormalized, "U^T A V needs column-normalized U and V");
  const std::size_t p = std::min(cfg.n_aggregates, m);
  const std::size_t q = std::min(cfg.n_aggregates, n);

  ExtremeEstimate out;
  out.sample_min.resize(cfg.samples);
  out.sample_max.resize(cfg.samples);
  for_each_sample(cfg.samples, cfg.workers, [&](std::size_t s) {
    const auto seed = derive_seed(cfg.seed, s);
    const auto u = build_interpolation(random_partition(m, p, derive_seed(seed, kRowStream)), true);
    const auto v = build_interpolation(random_partition(n, q, derive_seed(seed, kColStream)), true);
    const auto sv = dense_singular_values(two_sided_product(a, u, v)).values;
    out.sample_max[s] = sv.front();
    out.sample_min[s] = sv.back();
  });
  out.min = *std::min_element(out.sample_min.begin(), out.sample_min.end());
  out.max = *std::max_element(out.sample_max.begin(), out.sample_max.end());

  if (cfg.refine) {
    RefineOptions opts;
    opts.tol = cfg.tol;
    opts.max_iters = cfg.max_iters;
    opts.seed = derive_seed(cfg.seed, cfg.samples);
    out.refined_min = singular_value_near_shift(a, out.min, opts);
    out.refined_max = singular_value_near_shift(a, out.max, opts);
  }
  return out;
}

}  // namespace specoarse
