#include "floatsolid/io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace floatsolid::io {
namespace {

constexpr std::array<char, 4> kMagic = {'F', 'L', 'T', 'C'};
constexpr std::size_t kHeaderBytes = 16;

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
}

std::uint64_t get_le(const std::string& in, std::size_t offset, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[offset + i])) << (8 * i);
  }
  return v;
}

}  // namespace

std::string encode_matrix(const MatrixXd& m) {
  if (m.rows() > UINT32_MAX || m.cols() > UINT32_MAX) throw FormatError("matrix too large");
  std::string out;
  out.reserve(kHeaderBytes + 8 * static_cast<std::size_t>(m.size()));
  out.append(kMagic.data(), kMagic.size());
  put_u32(out, static_cast<std::uint32_t>(m.rows()));
  put_u32(out, static_cast<std::uint32_t>(m.cols()));
  put_u32(out, 0);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) put_u64(out, std::bit_cast<std::uint64_t>(m(i, j)));
  }
  return out;
}

MatrixXd decode_matrix(const std::string& bytes) {
  if (bytes.size() < kHeaderBytes) throw FormatError("matrix file: truncated header");
  if (std::memcmp(bytes.data(), kMagic.data(), kMagic.size()) != 0) {
    throw FormatError("matrix file: bad magic");
  }
  const auto rows = static_cast<Eigen::Index>(get_le(bytes, 4, 4));
  const auto cols = static_cast<Eigen::Index>(get_le(bytes, 8, 4));
  const std::size_t expected = kHeaderBytes + 8 * static_cast<std::size_t>(rows * cols);
  if (bytes.size() != expected) throw FormatError("matrix file: payload size mismatch");
  MatrixXd m(rows, cols);
  std::size_t offset = kHeaderBytes;
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j, offset += 8) {
      m(i, j) = std::bit_cast<double>(get_le(bytes, offset, 8));
    }
  }
  return m;
}

void write_matrix(const std::filesystem::path& path, const MatrixXd& m) {
  write_text(path, encode_matrix(m));
}

MatrixXd read_matrix(const std::filesystem::path& path) { return decode_matrix(read_text(path)); }

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto result = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), result.ptr);
}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header.size()) throw FormatError("csv: row width does not match header");
  rows.push_back(std::move(row));
}

std::string CsvTable::str() const {
  std::ostringstream out;
  auto emit = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) out << ',';
      out << cells[i];
    }
    out << '\n';
  };
  emit(header);
  for (const auto& row : rows) emit(row);
  return out.str();
}

CsvTable matrix_csv(const MatrixXd& m) {
  CsvTable t{{"i", "j", "value"}, {}};
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      t.add_row({std::to_string(i), std::to_string(j), format_double(m(i, j))});
    }
  }
  return t;
}

CsvTable trajectory_csv(const Trajectory& tr) {
  CsvTable t{{"t", "H", "Hdot", "q_minus", "q_plus", "E", "u"}, {}};
  for (std::size_t n = 0; n < tr.size(); ++n) {
    t.add_row({format_double(tr.times[n]), format_double(tr.H[n]), format_double(tr.Hdot[n]),
               format_double(tr.q_minus[n]), format_double(tr.q_plus[n]),
               format_double(tr.energies[n]), format_double(tr.inputs[n])});
  }
  return t;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw FormatError("failed writing '" + path.string() + "'");
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace floatsolid::io
