#include <gtest/gtest.h>

#include <filesystem>
#include <limits>

#include "floatsolid/errors.hpp"
#include "floatsolid/io.hpp"

using namespace floatsolid;

TEST(Io, MatrixRoundTripIsExact) {
  MatrixXd m(2, 3);
  m << 1.0, -0.1, 1e-300, std::numeric_limits<double>::max(), 0.0, -3.25;
  const std::string bytes = io::encode_matrix(m);
  EXPECT_EQ(bytes.size(), 16u + 6u * 8u);
  EXPECT_EQ(bytes.substr(0, 4), "FLTC");
  EXPECT_EQ(io::decode_matrix(bytes), m);
}

TEST(Io, FileRoundTrip) {
  const std::filesystem::path path =
      std::filesystem::temp_directory_path() / "floatsolid_io_test" / "m.bin";
  const MatrixXd m = MatrixXd::Identity(3, 3) * 0.5;
  io::write_matrix(path, m);
  EXPECT_EQ(io::read_matrix(path), m);
  std::filesystem::remove_all(path.parent_path());
}

TEST(Io, BadMagicIsRejected) {
  std::string bytes = io::encode_matrix(MatrixXd::Ones(2, 2));
  bytes[0] = 'X';
  EXPECT_THROW(io::decode_matrix(bytes), FormatError);
}

TEST(Io, TruncatedPayloadIsRejected) {
  const std::string bytes = io::encode_matrix(MatrixXd::Ones(2, 2));
  EXPECT_THROW(io::decode_matrix(bytes.substr(0, bytes.size() - 1)), FormatError);
  EXPECT_THROW(io::decode_matrix("FLT"), FormatError);
}

TEST(Io, FormatDoubleRoundTrips) {
  for (double v : {0.1, -2.5e-17, 1.0 / 3.0, 12345678.9}) {
    EXPECT_EQ(std::stod(io::format_double(v)), v);
  }
}

TEST(Io, CsvTableLayout) {
  io::CsvTable t{{"x", "y"}, {}};
  t.add_row({"1", "2"});
  t.add_row({"3", "4"});
  EXPECT_EQ(t.str(), "x,y\n1,2\n3,4\n");
}
