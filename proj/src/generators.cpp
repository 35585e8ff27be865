#include "specoarse/generators.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <random>

#include "specoarse/error.hpp"
#include "specoarse/rng.hpp"

namespace specoarse {
namespace {

void check_dims(std::span<const std::size_t> dims) {
  if (dims.empty() || dims.size() > 3) {
    throw Error(ErrorCode::InvalidArgument, "grid must have 1 to 3 dimensions");
  }
  for (std::size_t d : dims) {
    if (d == 0) throw Error(ErrorCode::InvalidArgument, "grid size must be at least 1");
  }
}

std::vector<double> cell_coefficients(std::span<const std::size_t> dims, const CoefficientField& field) {
  std::size_t n = 1;
  for (std::size_t d : dims) n *= d;
  std::vector<double> c(n, 1.0);
  if (field.kind == CoefficientKind::Uniform) return c;

  const std::size_t side = skyscraper_block_side(dims);
  std::array<std::size_t, 3> blocks{1, 1, 1};
  for (std::size_t k = 0; k < dims.size(); ++k) blocks[k] = (dims[k] + side - 1) / side;

  Rng rng(field.seed);
  std::uniform_int_distribution<int> exponent(0, 3);
  std::vector<double> block_value(blocks[0] * blocks[1] * blocks[2]);
  for (double& v : block_value) v = std::pow(10.0, exponent(rng));

  std::array<std::size_t, 3> ext{1, 1, 1};
  std::copy(dims.begin(), dims.end(), ext.begin());
  for (std::size_t z = 0; z < ext[2]; ++z)
    for (std::size_t y = 0; y < ext[1]; ++y)
      for (std::size_t x = 0; x < ext[0]; ++x) {
        const std::size_t b = (x / side) + blocks[0] * ((y / side) + blocks[1] * (z / side));
        c[x + ext[0] * (y + ext[1] * z)] = block_value[b];
      }
  return c;
}

std::size_t parse_count(std::string_view s, const std::string& spec) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw Error(ErrorCode::InvalidArgument, "bad number '" + std::string(s) + "' in generator '" + spec + "'");
  }
  return v;
}

std::vector<std::size_t> parse_dims(std::string_view s, const std::string& spec) {
  std::vector<std::size_t> dims;
  std::size_t start = 0;
  while (true) {
    const auto x = s.find('x', start);
    dims.push_back(parse_count(s.substr(start, x == std::string_view::npos ? s.npos : x - start), spec));
    if (x == std::string_view::npos) break;
    start = x + 1;
  }
  return dims;
}

}  // namespace

std::size_t skyscraper_block_side(std::span<const std::size_t> dims) {
  const std::size_t largest = *std::max_element(dims.begin(), dims.end());
  return std::max<std::size_t>(1, (largest + 4) / 5);
}

SparseMatrix gen_laplacian(std::span<const std::size_t> dims, const CoefficientField& field) {
  check_dims(dims);
  const auto coeff = cell_coefficients(dims, field);
  std::array<std::size_t, 3> ext{1, 1, 1};
  std::copy(dims.begin(), dims.end(), ext.begin());
  const std::array<std::size_t, 3> stride{1, ext[0], ext[0] * ext[1]};
  const std::size_t n = coeff.size();

  std::vector<Triplet> t;
  t.reserve(n * (1 + 2 * dims.size()));
  for (std::size_t z = 0; z < ext[2]; ++z)
    for (std::size_t y = 0; y < ext[1]; ++y)
      for (std::size_t x = 0; x < ext[0]; ++x) {
        const std::array<std::size_t, 3> pos{x, y, z};
        const std::size_t i = x + ext[0] * (y + ext[1] * z);
        double diag = 0.0;
        for (std::size_t k = 0; k < dims.size(); ++k) {
          // Lower and upper neighbour along axis k; a missing one is a
          // Dirichlet boundary face.
          if (pos[k] > 0) {
            const std::size_t j = i - stride[k];
            const double w = 0.5 * (coeff[i] + coeff[j]);
            t.push_back({i, j, -w});
            diag += w;
          } else {
            diag += coeff[i];
          }
          if (pos[k] + 1 < ext[k]) {
            const std::size_t j = i + stride[k];
            const double w = 0.5 * (coeff[i] + coeff[j]);
            t.push_back({i, j, -w});
            diag += w;
          } else {
            diag += coeff[i];
          }
        }
        t.push_back({i, i, diag});
      }
  return SparseMatrix::from_triplets(n, n, t);
}

SparseMatrix gen_shifted_laplacian(std::span<const std::size_t> dims, double shift) {
  const SparseMatrix lap = gen_laplacian(dims);
  std::vector<Triplet> t;
  t.reserve(lap.nnz() + lap.nrows());
  const auto rp = lap.row_ptr();
  const auto ci = lap.col_idx();
  const auto v = lap.values();
  for (std::size_t i = 0; i < lap.nrows(); ++i) {
    for (std::size_t p = rp[i]; p < rp[i + 1]; ++p) t.push_back({i, ci[p], v[p]});
    t.push_back({i, i, shift});
  }
  return SparseMatrix::from_triplets(lap.nrows(), lap.ncols(), t);
}

DenseMatrix gen_dense_random(std::size_t m, std::size_t n, std::uint64_t seed) {
  if (m == 0 || n == 0) throw Error(ErrorCode::InvalidArgument, "random matrix size must be at least 1");
  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  DenseMatrix r(m, n);
  for (double& v : r.data()) v = unit(rng);
  return r;
}

DenseMatrix gen_dense_random(std::size_t n, std::uint64_t seed) { return gen_dense_random(n, n, seed); }

DenseMatrix gen_random_symmetric(std::size_t n, std::uint64_t seed) {
  const DenseMatrix r = gen_dense_random(n, seed);
  DenseMatrix s(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s(i, j) = 0.5 * (r(i, j) + r(j, i));
  return s;
}

GeneratorSpec parse_generator_spec(const std::string& text) {
  GeneratorSpec spec;
  spec.text = text;
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw Error(ErrorCode::InvalidArgument, "generator '" + text + "' lacks ':<size>'");
  }
  const std::string family = text.substr(0, colon);
  std::string_view rest(text);
  rest.remove_prefix(colon + 1);
  std::string_view size_part = rest;
  std::string_view seed_part;
  if (const auto c2 = rest.find(':'); c2 != std::string_view::npos) {
    size_part = rest.substr(0, c2);
    seed_part = rest.substr(c2 + 1);
  }
  spec.dims = parse_dims(size_part, text);
  if (!seed_part.empty()) spec.seed = parse_count(seed_part, text);

  auto expect_dims = [&](std::size_t lo, std::size_t hi) {
    if (spec.dims.size() < lo || spec.dims.size() > hi) {
      throw Error(ErrorCode::InvalidArgument, "generator '" + text + "' has the wrong number of sizes");
    }
  };
  auto no_seed = [&] {
    if (!seed_part.empty()) throw Error(ErrorCode::InvalidArgument, "generator '" + text + "' takes no seed");
  };
  if (family == "lap1d" || family == "lap2d" || family == "lap3d") {
    const std::size_t want = static_cast<std::size_t>(family[3] - '0');
    expect_dims(want, want);
    no_seed();
    spec.family = GeneratorSpec::Family::Laplacian;
  } else if (family == "sky") {
    expect_dims(1, 3);
    spec.family = GeneratorSpec::Family::Skyscraper;
  } else if (family == "rand") {
    expect_dims(1, 2);
    if (spec.dims.size() == 1) spec.dims.push_back(spec.dims[0]);
    spec.family = GeneratorSpec::Family::Random;
  } else if (family == "randsym") {
    expect_dims(1, 1);
    spec.family = GeneratorSpec::Family::RandomSymmetric;
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown generator family '" + family + "'");
  }
  for (std::size_t d : spec.dims) {
    if (d == 0) throw Error(ErrorCode::InvalidArgument, "generator '" + text + "' has a zero size");
  }
  return spec;
}

SparseMatrix generate(const GeneratorSpec& spec) {
  switch (spec.family) {
    case GeneratorSpec::Family::Laplacian:
      return gen_laplacian(spec.dims);
    case GeneratorSpec::Family::Skyscraper:
      return gen_laplacian(spec.dims, {CoefficientKind::Skyscraper, spec.seed});
    case GeneratorSpec::Family::Random:
      return SparseMatrix::from_dense(gen_dense_random(spec.dims[0], spec.dims[1], spec.seed));
    case GeneratorSpec::Family::RandomSymmetric:
      return SparseMatrix::from_dense(gen_random_symmetric(spec.dims[0], spec.seed));
  }
  throw Error(ErrorCode::InvalidArgument, "unknown generator family");
}

}  // namespace specoarse
