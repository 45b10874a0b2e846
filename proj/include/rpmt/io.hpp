#pragma once

#include <string>

#include "rpmt/types.hpp"

namespace rpmt {

// Numeric CSV with one observation per row; a non-numeric first line is
// treated as a header and skipped. Comma, semicolon or whitespace separated.
Matrix read_matrix_csv(const std::string& path);

void write_matrix_csv(const Matrix& m, const std::string& path);

}  // namespace rpmt
