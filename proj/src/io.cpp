#include "rpmt/io.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace rpmt {

namespace {

bool parse_row(const std::string& line, std::vector<double>& out) {
  out.clear();
  std::string token;
  std::istringstream is(line);
  // Normalize separators to whitespace first.
  std::string normalized = line;
  for (char& c : normalized) {
    if (c == ',' || c == ';' || c == '\t') c = ' ';
  }
  std::istringstream fields(normalized);
  while (fields >> token) {
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0') return false;
    out.push_back(v);
  }
  return !out.empty();
}

}  // namespace

Matrix read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_matrix_csv: cannot open " + path);

  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  std::size_t ncols = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> row;
    if (!parse_row(line, row)) {
      if (first) {
        first = false;  // header line
        continue;
      }
      throw std::runtime_error("read_matrix_csv: non-numeric row in " + path);
    }
    first = false;
    if (ncols == 0) ncols = row.size();
    if (row.size() != ncols) {
      throw std::runtime_error("read_matrix_csv: ragged rows in " + path);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("read_matrix_csv: no data rows in " + path);

  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(ncols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < ncols; ++j) {
      m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    }
  }
  return m;
}

void write_matrix_csv(const Matrix& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_matrix_csv: cannot open " + path);
  out.precision(17);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << m(i, j);
    }
    out << '\n';
  }
}

}  // namespace rpmt
