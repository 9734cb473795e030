#pragma once

// Dense binary matrix files, CSV tables and small file helpers.
//
// Binary layout: a 16-byte header ("FLTC", uint32 rows, uint32 cols, 4 zero
// bytes, all little-endian) followed by rows*cols float64 values in row-major
// little-endian order.

#include <Eigen/Dense>

#include <filesystem>
#include <string>
#include <vector>

#include "floatsolid/dynamics.hpp"
#include "floatsolid/linalg.hpp"

namespace floatsolid::io {

std::string encode_matrix(const MatrixXd& m);
/// Throws FormatError on a bad magic, truncated payload or trailing bytes.
MatrixXd decode_matrix(const std::string& bytes);

void write_matrix(const std::filesystem::path& path, const MatrixXd& m);
MatrixXd read_matrix(const std::filesystem::path& path);

/// Shortest round-trip decimal representation of a double.
std::string format_double(double v);

/// A header row plus rows of already formatted cells.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  std::string str() const;
};

/// Columns: i, j, value.
CsvTable matrix_csv(const MatrixXd& m);

/// Columns: t, H, Hdot, q_minus, q_plus, E, u.
CsvTable trajectory_csv(const Trajectory& tr);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace floatsolid::io
