#pragma once

#include <string>
#include <vector>

#include "linalg.hpp"

namespace bmvr {

struct CsvTable {
  std::vector<std::string> columns;
  Matrix values; // n_rows x n_cols
};

// Parse a headered, comma-delimited numeric file.  Throws std::runtime_error
// naming the offending row and column on non-numeric cells or ragged rows.
CsvTable read_csv(const std::string& path);

// Write with enough digits (%.17g) that read_csv(write_csv(x)) == x bitwise.
void write_csv(const std::string& path, const CsvTable& table);
void write_matrix_csv(const std::string& path, const Matrix& m,
                      const std::vector<std::string>& columns);
// Headered single-matrix read; column names discarded.
Matrix read_matrix_csv(const std::string& path);

// Shortest round-trip decimal form of one double (printf %.17g).
std::string format_double(double v);

} // namespace bmvr
