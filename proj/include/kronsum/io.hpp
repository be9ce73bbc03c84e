#ifndef KRONSUM_IO_HPP
#define KRONSUM_IO_HPP

#include <string>

#include <json.hpp>

#include "kronsum/model.hpp"

namespace kronsum {

// Headerless CSV: one row per spatial variable, comma separators, '\n' line
// endings, 17 significant digits (exact double round trip).
std::string matrix_to_csv(const Matrix& values);
void write_csv(const Matrix& values, const std::string& path);

Matrix read_csv_matrix(const std::string& path);

// Rows = variables; transpose flips the orientation. Errors carry the first
// offending line (ragged) or row/column (non-numeric).
DataMatrix ingest_csv(const std::string& path, bool transpose = false);

// {"n":..., "t":..., "edges":[{"i":...,"j":...,"w":...}]}, 1-based indices.
nlohmann::json precision_edges_json(const Matrix& theta, double t, double threshold = 0.0);

void write_text(const std::string& text, const std::string& path);

}  // namespace kronsum

#endif  // KRONSUM_IO_HPP
