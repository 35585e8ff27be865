#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "specoarse/dense_matrix.hpp"
#include "specoarse/sparse_matrix.hpp"

namespace specoarse {

enum class CoefficientKind { Uniform, Skyscraper };

struct CoefficientField {
  CoefficientKind kind = CoefficientKind::Uniform;
  std::uint64_t seed = 0;
};

/// Finite-difference Laplacian on a 1-, 2- or 3-D grid with homogeneous
/// Dirichlet boundaries (3/5/7-point stencil, lexicographic ordering with the
/// first dimension fastest).
///
/// Each cell carries a coefficient c; an interior face between cells i and j
/// contributes (c_i + c_j) / 2 to both diagonals and the negated value to the
/// two off-diagonals, and a boundary face contributes c_i to the diagonal.
/// Uniform mode uses c = 1 everywhere. Skyscraper mode tiles the grid with
/// cubic blocks of side skyscraper_block_side(dims) and gives each block
/// c = 10^d with d drawn from {0, 1, 2, 3}.
SparseMatrix gen_laplacian(std::span<const std::size_t> dims, const CoefficientField& field = {});
std::size_t skyscraper_block_side(std::span<const std::size_t> dims);

/// Laplacian plus shift * I: a strictly diagonally dominant M-matrix for any
/// shift > 0.
SparseMatrix gen_shifted_laplacian(std::span<const std::size_t> dims, double shift);

/// Entries i.i.d. uniform on [0, 1).
DenseMatrix gen_dense_random(std::size_t n, std::uint64_t seed);
DenseMatrix gen_dense_random(std::size_t m, std::size_t n, std::uint64_t seed);
/// (R + R^T) / 2 for R = gen_dense_random(n, seed).
DenseMatrix gen_random_symmetric(std::size_t n, std::uint64_t seed);

/// Parsed form of the generator mini-grammar:
///   lap1d:n | lap2d:AxB | lap3d:AxBxC | sky:AxBxC[:seed]
///   | rand:n | rand:mxn[:seed] | randsym:n[:seed]
struct GeneratorSpec {
  enum class Family { Laplacian, Skyscraper, Random, RandomSymmetric };
  Family family = Family::Laplacian;
  std::vector<std::size_t> dims;
  std::uint64_t seed = 0;
  std::string text;
};

GeneratorSpec parse_generator_spec(const std::string& text);
SparseMatrix generate(const GeneratorSpec& spec);

}  // namespace specoarse
