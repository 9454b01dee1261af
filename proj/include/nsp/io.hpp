#pragma once

#include <string>

#include "nsp/matrix.hpp"

namespace nsp {

/// Reads a dense matrix from CSV: one row per line, comma- or
/// whitespace-separated decimal floats, `#` starts a comment line.
/// Dimensions are inferred; ragged rows are a parse error.
Matrix read_matrix_csv(const std::string& path);
Matrix parse_matrix_csv(const std::string& text);

/// Writes with 17 significant digits, comma-separated.
void write_matrix_csv(const std::string& path, const Matrix& m);
std::string format_matrix_csv(const Matrix& m);

}  // namespace nsp
