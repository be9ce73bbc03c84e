#include "kronsum/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace kronsum {

namespace {

void append_double(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

}  // namespace

std::string matrix_to_csv(const Matrix& values) {
  std::string out;
  out.reserve(static_cast<std::size_t>(values.size()) * 24);
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      if (j) out += ',';
      append_double(out, values(i, j));
    }
    out += '\n';
  }
  return out;
}

void write_text(const std::string& text, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << text;
  if (!f) throw std::runtime_error("write failed: " + path);
}

void write_csv(const Matrix& values, const std::string& path) {
  write_text(matrix_to_csv(values), path);
}

Matrix read_csv_matrix(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() && f.peek() == EOF) break;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    int col = 0;
    while (std::getline(ss, cell, ',')) {
      ++col;
      try {
        std::size_t used = 0;
        double v = std::stod(cell, &used);
        while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
        if (used != cell.size()) throw std::invalid_argument("trailing characters");
        row.push_back(v);
      } catch (const std::exception&) {
        throw std::runtime_error("non-numeric cell at row " + std::to_string(lineno) +
                                 ", column " + std::to_string(col) + " in " + path);
      }
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::runtime_error("ragged CSV: line " + std::to_string(lineno) + " has " +
                               std::to_string(row.size()) + " cells, expected " +
                               std::to_string(rows.front().size()) + " in " + path);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("empty CSV: " + path);
  Matrix out(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) out(i, j) = rows[i][j];
  return out;
}

DataMatrix ingest_csv(const std::string& path, bool transpose) {
  Matrix values = read_csv_matrix(path);
  if (transpose) values.transposeInPlace();
  return DataMatrix::from_values(std::move(values));
}

nlohmann::json precision_edges_json(const Matrix& theta, double t, double threshold) {
  nlohmann::json edges = nlohmann::json::array();
  for (Eigen::Index i = 0; i < theta.rows(); ++i)
    for (Eigen::Index j = i + 1; j < theta.cols(); ++j)
      if (std::abs(theta(i, j)) > threshold)
        edges.push_back({{"i", i + 1}, {"j", j + 1}, {"w", theta(i, j)}});
  return {{"n", theta.rows()}, {"t", t}, {"edges", edges}};
}

}  // namespace kronsum
