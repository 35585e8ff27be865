#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <sstream>

#include "oracle.hpp"
#include "specoarse/aggregation.hpp"
#include "specoarse/error.hpp"
#include "specoarse/generators.hpp"

using namespace specoarse;

namespace {

SparseMatrix tridiag(std::size_t n) {
  const std::size_t dims[] = {n};
  return gen_laplacian(dims);
}

// Quadratic re-execution of the greedy rule straight from the dense form.
std::vector<std::size_t> greedy_oracle(const Eigen::MatrixXd& a, double beta) {
  const auto n = static_cast<std::size_t>(a.rows());
  std::vector<std::vector<bool>> strong(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    double row_max = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      if (k != i) row_max = std::max(row_max, std::abs(a(i, k)));
    for (std::size_t j = 0; j < n; ++j)
      if (j != i && a(i, j) != 0.0 && a(i, j) < -beta * row_max) strong[i][j] = true;
  }
  std::vector<std::size_t> part(n, n);
  std::size_t next = 0;
  for (;;) {
    std::size_t best = n, best_count = n + 1;
    for (std::size_t i = 0; i < n; ++i) {
      if (part[i] != n) continue;
      std::size_t count = 0;
      for (std::size_t j = 0; j < n; ++j) count += strong[i][j] && part[j] == n;
      if (count < best_count) {
        best = i;
        best_count = count;
      }
    }
    if (best == n) break;
    std::vector<std::size_t> members{best};
    for (std::size_t j = 0; j < n; ++j)
      if (strong[best][j] && part[j] == n) members.push_back(j);
    for (std::size_t j : members) part[j] = next;
    ++next;
  }
  return part;
}

// Aggregates as a set of node sets, i.e. the partition up to relabelling.
std::set<std::set<std::size_t>> as_sets(const Partition& p) {
  std::set<std::set<std::size_t>> out;
  for (const auto& g : inverse_part(p)) out.emplace(g.begin(), g.end());
  return out;
}

// Symmetric matrix with negative off-diagonals of distinct magnitudes on a
// sparse random pattern.
SparseMatrix random_graph_matrix(std::size_t n, unsigned seed, double density) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0), mag(0.1, 1.0);
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < n; ++i) {
    t.push_back({i, i, 4.0});
    for (std::size_t j = i + 1; j < n; ++j) {
      if (coin(rng) > density) continue;
      const double v = coin(rng) < 0.8 ? -mag(rng) : mag(rng);
      t.push_back({i, j, v});
      t.push_back({j, i, v});
    }
  }
  return SparseMatrix::from_triplets(n, n, t);
}

SparseMatrix permute(const SparseMatrix& a, const std::vector<std::size_t>& perm) {
  // new index of old node i is perm[i]
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < a.nrows(); ++i)
    for (std::size_t p = a.row_ptr()[i]; p < a.row_ptr()[i + 1]; ++p)
      t.push_back({perm[i], perm[a.col_idx()[p]], a.values()[p]});
  return SparseMatrix::from_triplets(a.nrows(), a.ncols(), t);
}

bool connected_within(const SparseMatrix& a, const std::vector<std::size_t>& nodes) {
  const std::set<std::size_t> inside(nodes.begin(), nodes.end());
  std::set<std::size_t> seen{nodes.front()};
  std::queue<std::size_t> q;
  q.push(nodes.front());
  while (!q.empty()) {
    const auto i = q.front();
    q.pop();
    for (std::size_t p = a.row_ptr()[i]; p < a.row_ptr()[i + 1]; ++p) {
      const auto j = a.col_idx()[p];
      if (inside.count(j) && seen.insert(j).second) q.push(j);
    }
  }
  return seen.size() == inside.size();
}

void check_partition_invariants(const Partition& p, std::size_t n) {
  REQUIRE(p.size() == n);
  const auto groups = inverse_part(p);
  std::size_t total = 0;
  for (const auto& g : groups) {
    CHECK_FALSE(g.empty());
    CHECK(std::is_sorted(g.begin(), g.end()));
    total += g.size();
  }
  CHECK(total == n);
}

}  // namespace

TEST_CASE("Partition rejects bad labels and empty aggregates") {
  CHECK_THROWS_AS(Partition({0, 2}, 2), Error);
  CHECK_THROWS_AS(Partition({0, 0}, 2), Error);
  try {
    Partition({0, 0, 2}, 3);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidPartition);
  }
}

TEST_CASE("strong coupling on tridiag(-1, 2, -1) of order 4") {
  const auto p = strong_coupling_aggregation(tridiag(4), 0.25);
  CHECK(p.labels() == std::vector<std::size_t>{0, 0, 1, 1});
  CHECK(p.n_aggregates() == 2);
  CHECK(p.labels() == greedy_oracle(oracle::to_eigen(tridiag(4)), 0.25));
}

TEST_CASE("strong coupling: no negative couplings gives singletons") {
  const Triplet t[] = {{0, 0, 1.0}, {1, 1, 2.0}, {2, 2, 3.0}};
  const auto diag = SparseMatrix::from_triplets(3, 3, t);
  for (double beta : {0.0, 0.25, 1.0}) {
    const auto p = strong_coupling_aggregation(diag, beta);
    CHECK(p.n_aggregates() == 3);
    CHECK(p.labels() == std::vector<std::size_t>{0, 1, 2});
  }
}

TEST_CASE("strong coupling: beta = 1 with a unique strongest coupling per row") {
  // Row maxima are attained by exactly one entry each; strict '<' excludes it.
  const Triplet t[] = {{0, 0, 3.0}, {0, 1, -2.0}, {1, 0, -2.0}, {1, 1, 3.0},
                       {1, 2, -1.0}, {2, 1, -1.0}, {2, 2, 3.0}};
  const auto p = strong_coupling_aggregation(SparseMatrix::from_triplets(3, 3, t), 1.0);
  CHECK(p.n_aggregates() == 3);
}

TEST_CASE("strong coupling errors") {
  const Triplet rect[] = {{0, 0, 1.0}};
  CHECK_THROWS_AS(strong_coupling_aggregation(SparseMatrix::from_triplets(1, 2, rect), 0.25), Error);
  const Triplet asym[] = {{0, 1, -1.0}, {0, 0, 1.0}, {1, 1, 1.0}};
  try {
    strong_coupling_aggregation(SparseMatrix::from_triplets(2, 2, asym), 0.25);
    FAIL("expected NotSymmetric");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotSymmetric);
  }
  CHECK_THROWS_AS(strong_coupling_aggregation(tridiag(3), 1.5), Error);
}

TEST_CASE("strong coupling matches the quadratic re-execution oracle") {
  for (unsigned seed = 0; seed < 40; ++seed) {
    const std::size_t n = 10 + seed;
    const auto a = random_graph_matrix(n, seed, 0.3);
    for (double beta : {0.0, 0.25, 0.6}) {
      CAPTURE(seed);
      CAPTURE(beta);
      const auto p = strong_coupling_aggregation(a, beta);
      CHECK(p.labels() == greedy_oracle(oracle::to_eigen(a), beta));
      check_partition_invariants(p, n);
    }
  }
  const std::size_t dims[] = {4, 4, 4};
  const auto sky = gen_laplacian(dims, {CoefficientKind::Skyscraper, 5});
  CHECK(strong_coupling_aggregation(sky, 0.25).labels() == greedy_oracle(oracle::to_eigen(sky), 0.25));
}

TEST_CASE("strong coupling is permutation invariant on tie-free instances") {
  std::size_t tie_free = 0;
  for (unsigned seed = 0; seed < 20000 && tie_free < 25; ++seed) {
    const std::size_t n = 5 + seed % 4;
    const auto a = random_graph_matrix(n, 1000 + seed, 0.6);
    AggregationStats stats;
    const auto p = strong_coupling_aggregation(a, 0.25, &stats);
    if (stats.ties != 0) continue;
    ++tie_free;

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::mt19937 rng(seed);
    std::shuffle(perm.begin(), perm.end(), rng);
    const auto q = strong_coupling_aggregation(permute(a, perm), 0.25);

    std::set<std::set<std::size_t>> mapped;
    for (const auto& g : inverse_part(p)) {
      std::set<std::size_t> s;
      for (std::size_t i : g) s.insert(perm[i]);
      mapped.insert(s);
    }
    CHECK(mapped == as_sets(q));
  }
  CHECK(tie_free >= 10);
}

TEST_CASE("bfs partition: aggregate count extremes") {
  const std::size_t dims[] = {5, 4};
  const auto a = gen_laplacian(dims);
  const auto single = bfs_graph_partition(a, 1, 3);
  CHECK(single.labels() == std::vector<std::size_t>(20, 0));

  const auto all = bfs_graph_partition(a, 20, 3);
  CHECK(all.n_aggregates() == 20);
  std::vector<std::size_t> labels = all.labels();
  std::sort(labels.begin(), labels.end());
  std::vector<std::size_t> expect(20);
  std::iota(expect.begin(), expect.end(), std::size_t{0});
  CHECK(labels == expect);

  CHECK_THROWS_AS(bfs_graph_partition(a, 0, 1), Error);
  CHECK_THROWS_AS(bfs_graph_partition(a, 21, 1), Error);
}

TEST_CASE("bfs partition of a path gives two intervals") {
  const auto a = tridiag(8);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto p = bfs_graph_partition(a, 2, seed);
    for (const auto& g : inverse_part(p)) {
      CHECK(g.back() - g.front() + 1 == g.size());
      CHECK(connected_within(a, g));
    }
  }
}

TEST_CASE("bfs partition: regions are connected and deterministic") {
  const std::size_t dims[] = {8, 8};
  const auto a = gen_laplacian(dims);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto p = bfs_graph_partition(a, 7, seed);
    check_partition_invariants(p, 64);
    for (const auto& g : inverse_part(p)) CHECK(connected_within(a, g));
    CHECK(p == bfs_graph_partition(a, 7, seed));
  }
}

TEST_CASE("bfs partition handles disconnected graphs") {
  const Triplet t[] = {{0, 0, 1.0}, {1, 1, 1.0}, {2, 2, 1.0}, {3, 3, 1.0}, {4, 4, 1.0}};
  const auto diag = SparseMatrix::from_triplets(5, 5, t);
  for (std::size_t k = 1; k <= 5; ++k) check_partition_invariants(bfs_graph_partition(diag, k, 9), 5);
}

TEST_CASE("random partition") {
  auto p = random_partition(4, 4, 17);
  auto labels = p.labels();
  std::sort(labels.begin(), labels.end());
  CHECK(labels == std::vector<std::size_t>{0, 1, 2, 3});

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    p = random_partition(5, 2, seed);
    std::multiset<std::size_t> sizes;
    for (const auto& g : inverse_part(p)) sizes.insert(g.size());
    CHECK(sizes == std::multiset<std::size_t>{2, 3});
  }

  CHECK(random_partition(100, 10, 5) == random_partition(100, 10, 5));
  CHECK_FALSE(random_partition(100, 10, 5) == random_partition(100, 10, 6));
  CHECK_THROWS_AS(random_partition(3, 0, 1), Error);
  CHECK_THROWS_AS(random_partition(3, 4, 1), Error);
}

TEST_CASE("random partition is balanced for many shapes") {
  for (std::size_t n = 1; n < 40; n += 3) {
    for (std::size_t k = 1; k <= n; k += 2) {
      const auto p = random_partition(n, k, n * 100 + k);
      check_partition_invariants(p, n);
      for (const auto& g : inverse_part(p)) {
        CHECK(g.size() >= n / k);
        CHECK(g.size() <= (n + k - 1) / k);
      }
    }
  }
}

TEST_CASE("inverse_part") {
  const auto groups = inverse_part(Partition({0, 1, 0, 1}, 2));
  CHECK(groups == std::vector<std::vector<std::size_t>>{{0, 2}, {1, 3}});
  CHECK(inverse_part(Partition({0, 0, 0}, 1)) == std::vector<std::vector<std::size_t>>{{0, 1, 2}});

  const auto p = random_partition(30, 7, 2);
  std::vector<std::size_t> rebuilt(30);
  const auto g = inverse_part(p);
  for (std::size_t j = 0; j < g.size(); ++j)
    for (std::size_t i : g[j]) rebuilt[i] = j;
  CHECK(rebuilt == p.labels());
}

TEST_CASE("empty aggregate repair steals from the largest aggregate") {
  std::vector<std::size_t> part{0, 0, 0, 2};
  repair_empty_aggregates(part, 3);
  CHECK(part == std::vector<std::size_t>{0, 0, 1, 2});
  Partition(part, 3);

  std::vector<std::size_t> too_few{0};
  CHECK_THROWS_AS(repair_empty_aggregates(too_few, 2), Error);
}

TEST_CASE("partition text round trip") {
  const auto p = random_partition(12, 5, 8);
  std::stringstream s;
  write_partition(s, p);
  CHECK(read_partition(s) == p);

  std::istringstream gap("0 0\n2 1\n");
  CHECK_THROWS_AS(read_partition(gap), Error);
  std::istringstream dup("0 0\n0 1\n1 1\n");
  CHECK_THROWS_AS(read_partition(dup), Error);
  std::istringstream junk("0 x\n");
  CHECK_THROWS_AS(read_partition(junk), Error);
  std::istringstream empty_agg("0 0\n1 2\n");
  CHECK_THROWS_AS(read_partition(empty_agg), Error);
  CHECK_THROWS_AS(load_partition("/nonexistent/part.txt"), Error);
}
