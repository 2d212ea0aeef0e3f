#include "csvio.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bmvr {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string strip(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_cell(const std::string& raw, size_t row, const std::string& column) {
  const std::string cell = strip(raw);
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (cell.empty() || end != cell.c_str() + cell.size() || errno == ERANGE ||
      !std::isfinite(v)) {
    throw std::runtime_error("csv parse error: non-numeric cell '" + cell +
                             "' at data row " + std::to_string(row) +
                             ", column '" + column + "'");
  }
  return v;
}

} // namespace

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("csv read error: cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("csv parse error: empty file '" + path + "'");
  CsvTable table;
  for (const auto& name : split_line(line)) table.columns.push_back(strip(name));
  const size_t ncol = table.columns.size();

  std::vector<double> cells;
  size_t nrow = 0;
  while (std::getline(in, line)) {
    if (strip(line).empty()) continue;
    const auto fields = split_line(line);
    ++nrow;
    if (fields.size() != ncol)
      throw std::runtime_error("csv parse error: data row " + std::to_string(nrow) +
                               " has " + std::to_string(fields.size()) +
                               " fields, expected " + std::to_string(ncol));
    for (size_t j = 0; j < ncol; ++j)
      cells.push_back(parse_cell(fields[j], nrow, table.columns[j]));
  }
  table.values.resize(static_cast<Eigen::Index>(nrow), static_cast<Eigen::Index>(ncol));
  for (size_t i = 0; i < nrow; ++i)
    for (size_t j = 0; j < ncol; ++j)
      table.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          cells[i * ncol + j];
  return table;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(const std::string& path, const CsvTable& table) {
  if (static_cast<Eigen::Index>(table.columns.size()) != table.values.cols())
    throw std::invalid_argument("csv write error: header/column count mismatch");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("csv write error: cannot open '" + path + "'");
  for (size_t j = 0; j < table.columns.size(); ++j) {
    if (j) out << ',';
    out << table.columns[j];
  }
  out << '\n';
  for (Eigen::Index i = 0; i < table.values.rows(); ++i) {
    for (Eigen::Index j = 0; j < table.values.cols(); ++j) {
      if (j) out << ',';
      out << format_double(table.values(i, j));
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("csv write error: write failed for '" + path + "'");
}

void write_matrix_csv(const std::string& path, const Matrix& m,
                      const std::vector<std::string>& columns) {
  write_csv(path, CsvTable{columns, m});
}

Matrix read_matrix_csv(const std::string& path) { return read_csv(path).values; }

} // namespace bmvr
