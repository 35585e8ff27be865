#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "specoarse/sparse_matrix.hpp"

namespace specoarse {

/// Node -> aggregate map. Every label lies in [0, n_aggregates) and every
/// aggregate owns at least one node, so the aggregates are disjoint and
/// cover all nodes.
class Partition {
 public:
  Partition() = default;
  /// Throws InvalidPartition when a label is out of range or an aggregate is
  /// empty.
  Partition(std::vector<std::size_t> part, std::size_t n_aggregates);

  std::size_t size() const noexcept { return part_.size(); }
  std::size_t n_aggregates() const noexcept { return n_aggregates_; }
  std::size_t operator[](std::size_t node) const noexcept { return part_[node]; }
  const std::vector<std::size_t>& labels() const noexcept { return part_; }

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::size_t n_aggregates_ = 0;
  std::vector<std::size_t> part_;
};

/// G_i = { j : part(j) = i }, each sorted ascending.
std::vector<std::vector<std::size_t>> inverse_part(const Partition& p);

/// Moves one node (the highest-numbered) from the largest aggregate into each
/// empty one, largest-first with ties to the smaller id. Requires
/// part.size() >= n_aggregates.
void repair_empty_aggregates(std::vector<std::size_t>& part, std::size_t n_aggregates);

struct AggregationStats {
  /// Selections where more than one unmarked node shared the minimal count.
  std::size_t ties = 0;
};

/// Classical AMG-style aggregation. S_i = { j != i : a_ij < -beta max_{k!=i}|a_ik| };
/// the unmarked node with the fewest unmarked strong neighbours is picked
/// (smallest index on ties) and forms an aggregate with those neighbours.
Partition strong_coupling_aggregation(const SparseMatrix& a, double beta,
                                      AggregationStats* stats = nullptr);

/// Region growing over the symmetrized adjacency graph. Roots are picked by
/// seeded farthest-point sampling: a uniform first root, then repeatedly a
/// uniform choice among the nodes at maximal hop distance from all roots so
/// far. Regions take turns claiming one node each, and aggregate j is grown
/// from the j-th root.
Partition bfs_graph_partition(const SparseMatrix& a, std::size_t n_aggregates, std::uint64_t seed);

/// Random permutation of the nodes cut into n_aggregates contiguous chunks of
/// size floor(N/n_aggregates) or ceil(N/n_aggregates).
Partition random_partition(std::size_t n, std::size_t n_aggregates, std::uint64_t seed);

/// One `node_index aggregate_id` pair per line, 0-based.
void write_partition(std::ostream& out, const Partition& p);
Partition read_partition(std::istream& in);
Partition load_partition(const std::filesystem::path& path);

}  // namespace specoarse
