#include "specoarse/aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "specoarse/error.hpp"
#include "specoarse/rng.hpp"

namespace specoarse {

Partition::Partition(std::vector<std::size_t> part, std::size_t n_aggregates)
    : n_aggregates_(n_aggregates), part_(std::move(part)) {
  std::vector<bool> seen(n_aggregates_, false);
  for (std::size_t i = 0; i < part_.size(); ++i) {
    if (part_[i] >= n_aggregates_) {
      throw Error(ErrorCode::InvalidPartition, "node " + std::to_string(i) + " has aggregate " +
                                                   std::to_string(part_[i]) + " >= " +
                                                   std::to_string(n_aggregates_));
    }
    seen[part_[i]] = true;
  }
  for (std::size_t j = 0; j < n_aggregates_; ++j) {
    if (!seen[j]) throw Error(ErrorCode::InvalidPartition, "aggregate " + std::to_string(j) + " is empty");
  }
}

std::vector<std::vector<std::size_t>> inverse_part(const Partition& p) {
  std::vector<std::vector<std::size_t>> groups(p.n_aggregates());
  for (std::size_t i = 0; i < p.size(); ++i) groups[p[i]].push_back(i);
  return groups;
}

void repair_empty_aggregates(std::vector<std::size_t>& part, std::size_t n_aggregates) {
  if (part.size() < n_aggregates) {
    throw Error(ErrorCode::InvalidAggregateCount, "more aggregates than nodes");
  }
  std::vector<std::size_t> size(n_aggregates, 0);
  for (std::size_t a : part) ++size[a];
  for (std::size_t empty = 0; empty < n_aggregates; ++empty) {
    if (size[empty] != 0) continue;
    const auto largest = static_cast<std::size_t>(std::max_element(size.begin(), size.end()) - size.begin());
    for (std::size_t i = part.size(); i-- > 0;) {
      if (part[i] == largest) {
        part[i] = empty;
        break;
      }
    }
    --size[largest];
    ++size[empty];
  }
}

Partition strong_coupling_aggregation(const SparseMatrix& a, double beta, AggregationStats* stats) {
  if (!a.is_square()) throw Error(ErrorCode::NotSquare, "strong coupling aggregation needs a square matrix");
  if (!a.symmetric()) throw Error(ErrorCode::NotSymmetric, "strong coupling aggregation needs a symmetric matrix");
  if (!(beta >= 0.0 && beta <= 1.0)) throw Error(ErrorCode::InvalidArgument, "beta must lie in [0, 1]");

  const std::size_t n = a.nrows();
  const auto rp = a.row_ptr();
  const auto ci = a.col_idx();
  const auto v = a.values();

  // strong[i] = S_i; coupled_to[j] = { i : j in S_i }.
  std::vector<std::vector<std::size_t>> strong(n), coupled_to(n);
  for (std::size_t i = 0; i < n; ++i) {
    double row_max = 0.0;
    for (std::size_t p = rp[i]; p < rp[i + 1]; ++p)
      if (ci[p] != i) row_max = std::max(row_max, std::abs(v[p]));
    const double threshold = -beta * row_max;
    for (std::size_t p = rp[i]; p < rp[i + 1]; ++p) {
      if (ci[p] != i && v[p] < threshold) {
        strong[i].push_back(ci[p]);
        coupled_to[ci[p]].push_back(i);
      }
    }
  }

  std::vector<std::size_t> unmarked_count(n);
  std::set<std::pair<std::size_t, std::size_t>> queue;  // (M_i, i)
  for (std::size_t i = 0; i < n; ++i) {
    unmarked_count[i] = strong[i].size();
    queue.emplace(unmarked_count[i], i);
  }

  constexpr std::size_t kUnassigned = static_cast<std::size_t>(-1);
  std::vector<std::size_t> part(n, kUnassigned);
  std::size_t n_aggregates = 0;

  auto mark = [&](std::size_t node, std::size_t aggregate) {
    queue.erase({unmarked_count[node], node});
    part[node] = aggregate;
    for (std::size_t i : coupled_to[node]) {
      if (part[i] != kUnassigned) continue;
      queue.erase({unmarked_count[i], i});
      --unmarked_count[i];
      queue.emplace(unmarked_count[i], i);
    }
  };

  while (!queue.empty()) {
    const auto [count, seed] = *queue.begin();
    if (stats != nullptr) {
      auto next = std::next(queue.begin());
      if (next != queue.end() && next->first == count) ++stats->ties;
    }
    const std::size_t id = n_aggregates++;
    std::vector<std::size_t> members;
    for (std::size_t j : strong[seed])
      if (part[j] == kUnassigned) members.push_back(j);
    mark(seed, id);
    for (std::size_t j : members) mark(j, id);
  }
  return Partition(std::move(part), n_aggregates);
}

Partition bfs_graph_partition(const SparseMatrix& a, std::size_t n_aggregates, std::uint64_t seed) {
  if (!a.is_square()) throw Error(ErrorCode::NotSquare, "graph partitioning needs a square matrix");
  const std::size_t n = a.nrows();
  if (n_aggregates < 1 || n_aggregates > n) {
    throw Error(ErrorCode::InvalidAggregateCount, std::to_string(n_aggregates) + " aggregates for " +
                                                      std::to_string(n) + " nodes");
  }

  // Symmetrized adjacency without self loops, neighbours ascending.
  std::vector<std::vector<std::size_t>> adj(n);
  {
    const auto rp = a.row_ptr();
    const auto ci = a.col_idx();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t p = rp[i]; p < rp[i + 1]; ++p)
        if (ci[p] != i) {
          adj[i].push_back(ci[p]);
          adj[ci[p]].push_back(i);
        }
    for (auto& nb : adj) {
      std::sort(nb.begin(), nb.end());
      nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    }
  }

  // Farthest-point roots: the first is uniform, each later one is drawn
  // uniformly among the nodes farthest (in hops) from every root so far.
  // Nodes in components without a root count as infinitely far.
  constexpr std::size_t kFar = static_cast<std::size_t>(-1);
  std::vector<std::size_t> roots;
  roots.reserve(n_aggregates);
  {
    Rng rng(seed);
    std::vector<std::size_t> dist(n, kFar);
    std::deque<std::size_t> queue;
    auto add_root = [&](std::size_t r) {
      roots.push_back(r);
      dist[r] = 0;
      queue.push_back(r);
      while (!queue.empty()) {
        const std::size_t i = queue.front();
        queue.pop_front();
        for (std::size_t j : adj[i]) {
          if (dist[j] > dist[i] + 1) {
            dist[j] = dist[i] + 1;
            queue.push_back(j);
          }
        }
      }
    };
    add_root(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
    std::vector<std::size_t> farthest;
    while (roots.size() < n_aggregates) {
      std::size_t best = 0;
      farthest.clear();
      for (std::size_t i = 0; i < n; ++i) {
        if (dist[i] == 0) continue;
        if (dist[i] > best) {
          best = dist[i];
          farthest.clear();
        }
        if (dist[i] == best) farthest.push_back(i);
      }
      add_root(farthest[std::uniform_int_distribution<std::size_t>(0, farthest.size() - 1)(rng)]);
    }
  }

  constexpr std::size_t kUnassigned = static_cast<std::size_t>(-1);
  std::vector<std::size_t> part(n, kUnassigned);
  struct Region {
    std::deque<std::size_t> frontier;
    std::size_t cursor = 0;  // next neighbour of frontier.front() to try
    std::size_t size = 0;
  };
  std::vector<Region> regions(n_aggregates);
  for (std::size_t j = 0; j < n_aggregates; ++j) {
    part[roots[j]] = j;
    regions[j].frontier.push_back(roots[j]);
    regions[j].size = 1;
  }
  std::size_t assigned = n_aggregates;

  auto claim_one = [&](std::size_t j) {
    Region& r = regions[j];
    while (!r.frontier.empty()) {
      const auto& nb = adj[r.frontier.front()];
      while (r.cursor < nb.size() && part[nb[r.cursor]] != kUnassigned) ++r.cursor;
      if (r.cursor < nb.size()) {
        const std::size_t node = nb[r.cursor++];
        part[node] = j;
        r.frontier.push_back(node);
        ++r.size;
        ++assigned;
        return true;
      }
      r.frontier.pop_front();
      r.cursor = 0;
    }
    return false;
  };

  std::size_t next_unassigned = 0;
  while (assigned < n) {
    bool grew = false;
    for (std::size_t j = 0; j < n_aggregates && assigned < n; ++j) grew = claim_one(j) || grew;
    if (grew) continue;
    // Every region is enclosed: hand the lowest unassigned node (a different
    // connected component) to the smallest region and keep growing from it.
    while (part[next_unassigned] != kUnassigned) ++next_unassigned;
    std::size_t smallest = 0;
    for (std::size_t j = 1; j < n_aggregates; ++j)
      if (regions[j].size < regions[smallest].size) smallest = j;
    part[next_unassigned] = smallest;
    regions[smallest].frontier.push_back(next_unassigned);
    ++regions[smallest].size;
    ++assigned;
  }
  repair_empty_aggregates(part, n_aggregates);
  return Partition(std::move(part), n_aggregates);
}

Partition random_partition(std::size_t n, std::size_t n_aggregates, std::uint64_t seed) {
  if (n_aggregates < 1 || n_aggregates > n) {
    throw Error(ErrorCode::InvalidAggregateCount, std::to_string(n_aggregates) + " aggregates for " +
                                                      std::to_string(n) + " nodes");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  // The first n % n_aggregates chunks get one extra node.
  const std::size_t base = n / n_aggregates;
  const std::size_t extra = n % n_aggregates;
  std::vector<std::size_t> part(n);
  std::size_t pos = 0;
  for (std::size_t j = 0; j < n_aggregates; ++j) {
    const std::size_t len = base + (j < extra ? 1 : 0);
    for (std::size_t t = 0; t < len; ++t) part[order[pos++]] = j;
  }
  repair_empty_aggregates(part, n_aggregates);
  return Partition(std::move(part), n_aggregates);
}

void write_partition(std::ostream& out, const Partition& p) {
  for (std::size_t i = 0; i < p.size(); ++i) out << i << ' ' << p[i] << '\n';
}

Partition read_partition(std::istream& in) {
  std::vector<std::size_t> part;
  std::vector<bool> filled;
  std::string line;
  std::size_t line_no = 0;
  std::size_t max_label = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    std::istringstream fields(line);
    long long node = -1, label = -1;
    if (!(fields >> node >> label) || node < 0 || label < 0) {
      throw Error(ErrorCode::ParseError, "partition line " + std::to_string(line_no) + ": expected 'node aggregate'");
    }
    const auto i = static_cast<std::size_t>(node);
    if (i >= part.size()) {
      part.resize(i + 1, 0);
      filled.resize(i + 1, false);
    }
    if (filled[i]) {
      throw Error(ErrorCode::ParseError, "partition line " + std::to_string(line_no) + ": node listed twice");
    }
    part[i] = static_cast<std::size_t>(label);
    filled[i] = true;
    max_label = std::max(max_label, part[i]);
  }
  if (part.empty()) throw Error(ErrorCode::ParseError, "partition file is empty");
  if (std::find(filled.begin(), filled.end(), false) != filled.end()) {
    throw Error(ErrorCode::ParseError, "partition file skips a node");
  }
  return Partition(std::move(part), max_label + 1);
}

Partition load_partition(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open partition file " + path.string());
  return read_partition(in);
}

}  // namespace specoarse
