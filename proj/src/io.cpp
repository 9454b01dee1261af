#include "nsp/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "nsp/errors.hpp"

namespace nsp {

Matrix parse_matrix_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream lines(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    for (char& ch : line)
      if (ch == ',' || ch == '\t' || ch == '\r' || ch == ';') ch = ' ';
    std::istringstream fields(line);
    std::vector<double> row;
    std::string tok;
    while (fields >> tok) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception&) {
        throw Error(Errc::Parse, "csv: bad number '" + tok + "' on line " + std::to_string(lineno));
      }
      if (used != tok.size())
        throw Error(Errc::Parse, "csv: bad number '" + tok + "' on line " + std::to_string(lineno));
      row.push_back(v);
    }
    if (row.empty()) continue;
    if (!rows.empty() && row.size() != rows.front().size())
      throw Error(Errc::Parse, "csv: ragged row on line " + std::to_string(lineno));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(Errc::Parse, "csv: no data rows");

  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  return m;
}

Matrix read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_matrix_csv(buf.str());
}

std::string format_matrix_csv(const Matrix& m) {
  std::string out;
  char field[64];
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      std::snprintf(field, sizeof(field), "%.17g", m(i, j));
      out += field;
      out += (j + 1 < m.cols()) ? "," : "\n";
    }
  }
  return out;
}

void write_matrix_csv(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::Io, "cannot open '" + path + "' for writing");
  out << format_matrix_csv(m);
  if (!out) throw Error(Errc::Io, "write failed for '" + path + "'");
}

}  // namespace nsp
