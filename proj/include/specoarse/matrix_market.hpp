#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "specoarse/sparse_matrix.hpp"

namespace specoarse {

/// Reads `%%MatrixMarket matrix coordinate real {general|symmetric}`.
/// Symmetric files are expanded to full storage; indices become 0-based.
SparseMatrix load_matrix_market(const std::filesystem::path& path);
SparseMatrix read_matrix_market(std::istream& in, const std::string& source_name = "<stream>");

/// Writes a general coordinate real file with 1-based indices.
void write_matrix_market(std::ostream& out, const SparseMatrix& a);

}  // namespace specoarse
