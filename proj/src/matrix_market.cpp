#include "specoarse/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <vector>

#include "specoarse/error.hpp"

namespace specoarse {
namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

[[noreturn]] void parse_error(const std::string& source, std::size_t line, const std::string& what) {
  throw Error(ErrorCode::ParseError, source + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

SparseMatrix read_matrix_market(std::istream& in, const std::string& source_name) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) parse_error(source_name, line_no, "empty file");

  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket") parse_error(source_name, line_no, "missing %%MatrixMarket banner");
  object = lower(object);
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (object != "matrix") parse_error(source_name, line_no, "object must be 'matrix'");
  if (format != "coordinate") {
    throw Error(ErrorCode::UnsupportedFormat, source_name + ": format '" + format + "' (need coordinate)");
  }
  if (field == "complex" || field == "pattern") {
    throw Error(ErrorCode::UnsupportedFormat, source_name + ": field '" + field + "' is not supported");
  }
  if (field != "real" && field != "integer" && field != "double") {
    parse_error(source_name, line_no, "unknown field '" + field + "'");
  }
  bool symmetric = false;
  if (symmetry == "symmetric") {
    symmetric = true;
  } else if (symmetry == "skew-symmetric" || symmetry == "hermitian") {
    throw Error(ErrorCode::UnsupportedFormat, source_name + ": symmetry '" + symmetry + "' is not supported");
  } else if (symmetry != "general") {
    parse_error(source_name, line_no, "unknown symmetry '" + symmetry + "'");
  }

  // Skip comments and blank lines up to the size line.
  do {
    if (!std::getline(in, line)) parse_error(source_name, line_no, "missing size line");
    ++line_no;
  } while (line.empty() || line[0] == '%' ||
           line.find_first_not_of(" \t\r") == std::string::npos);

  std::size_t nrows = 0, ncols = 0, nnz = 0;
  {
    std::istringstream size_line(line);
    if (!(size_line >> nrows >> ncols >> nnz)) parse_error(source_name, line_no, "malformed size line");
  }
  if (symmetric && nrows != ncols) parse_error(source_name, line_no, "symmetric file must be square");

  std::vector<Triplet> triplets;
  triplets.reserve(symmetric ? 2 * nnz : nnz);
  std::size_t read = 0;
  while (read < nnz && std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '%' || line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream entry(line);
    long long i = 0, j = 0;
    double v = 0.0;
    if (!(entry >> i >> j >> v)) parse_error(source_name, line_no, "malformed entry");
    if (i < 1 || j < 1 || static_cast<std::size_t>(i) > nrows || static_cast<std::size_t>(j) > ncols) {
      parse_error(source_name, line_no, "entry index out of range");
    }
    const auto r = static_cast<std::size_t>(i - 1);
    const auto c = static_cast<std::size_t>(j - 1);
    triplets.push_back({r, c, v});
    if (symmetric && r != c) triplets.push_back({c, r, v});
    ++read;
  }
  if (read != nnz) {
    parse_error(source_name, line_no,
                "expected " + std::to_string(nnz) + " entries, found " + std::to_string(read));
  }
  return SparseMatrix::from_triplets(nrows, ncols, triplets);
}

SparseMatrix load_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open matrix file " + path.string());
  return read_matrix_market(in, path.string());
}

void write_matrix_market(std::ostream& out, const SparseMatrix& a) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.nrows() << ' ' << a.ncols() << ' ' << a.nnz() << '\n';
  const auto rp = a.row_ptr();
  const auto ci = a.col_idx();
  const auto v = a.values();
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  for (std::size_t i = 0; i < a.nrows(); ++i)
    for (std::size_t p = rp[i]; p < rp[i + 1]; ++p) out << i + 1 << ' ' << ci[p] + 1 << ' ' << v[p] << '\n';
  out.precision(old_precision);
}

}  // namespace specoarse
