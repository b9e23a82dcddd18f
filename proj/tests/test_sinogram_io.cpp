#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <unistd.h>

#include <gtest/gtest.h>

#include "ert/image_io.hpp"
#include "ert/sinogram_io.hpp"

namespace ert {
namespace {

namespace fs = std::filesystem;

Sinogram random_sinogram(int n_s = 7, int n_L = 9) {
  const ScanGeometry g(0.7314);
  SinogramSpec spec;
  spec.n_s = n_s;
  spec.n_L = n_L;
  Sinogram sino = make_sinogram(g, spec);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> d(0.0, 1e3);
  for (double& v : sino.values()) v = d(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
  sino.values()[3] = -0.0;
  sino.values()[4] = 5e-324;
  return sino;
}

void expect_bit_equal(const Sinogram& a, const Sinogram& b) {
  EXPECT_EQ(a.geometry().alpha(), b.geometry().alpha());
  EXPECT_EQ(a.n_s(), b.n_s());
  EXPECT_EQ(a.n_L(), b.n_L());
  EXPECT_EQ(a.L_min(), b.L_min());
  EXPECT_EQ(a.L_max(), b.L_max());
  ASSERT_EQ(a.values().size(), b.values().size());
  EXPECT_EQ(std::memcmp(a.values().data(), b.values().data(), 8 * a.values().size()), 0);
}

std::size_t header_size(const Sinogram& s) {
  std::ostringstream os;
  write_sinogram(s, os, SinogramFormat::binary);
  return os.str().size() - 8 * s.values().size();
}

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("ert_io_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

using SinogramFile = TempDir;

TEST_F(SinogramFile, TextRoundTripIsBitExact) {
  const Sinogram sino = random_sinogram();
  write_sinogram(sino, path("a.sino.txt"));
  expect_bit_equal(sino, read_sinogram(path("a.sino.txt")));
}

TEST_F(SinogramFile, BinaryRoundTripIsBitExact) {
  const Sinogram sino = random_sinogram(11, 6);
  write_sinogram(sino, path("a.sino.bin"));
  expect_bit_equal(sino, read_sinogram(path("a.sino.bin")));
  EXPECT_EQ(fs::file_size(path("a.sino.bin")), header_size(sino) + 8 * 66);
}

TEST_F(SinogramFile, UnknownExtensionAndMissingFile) {
  EXPECT_THROW(write_sinogram(random_sinogram(), path("a.txt")), ConfigError);
  EXPECT_THROW(read_sinogram(path("missing.sino.txt")), ConfigError);
}

TEST(SinogramText, HeaderLayout) {
  std::ostringstream os;
  write_sinogram(random_sinogram(5, 5), os, SinogramFormat::text);
  std::istringstream in(os.str());
  std::string line;
  std::vector<std::string> keys;
  for (int k = 0; k < 5 && std::getline(in, line); ++k) keys.push_back(line.substr(0, line.find('=')));
  EXPECT_EQ(keys, (std::vector<std::string>{"alpha", "n_s", "n_L", "L_min", "L_max"}));
}

std::string header_for(const Sinogram& s) {
  std::ostringstream os;
  write_sinogram(s, os, SinogramFormat::text);
  const std::string all = os.str();
  std::size_t pos = 0;
  for (int k = 0; k < 5; ++k) pos = all.find('\n', pos) + 1;
  return all.substr(0, pos);
}

void expect_parse_error(const std::string& text, SinogramFormat f, const std::string& needle) {
  std::istringstream in(text);
  try {
    read_sinogram(in, f, "x.sino");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
  }
}

TEST(SinogramText, ParseErrorsCarryLineNumbers) {
  const Sinogram sino = random_sinogram(2, 3);
  const std::string header = header_for(sino);
  expect_parse_error("", SinogramFormat::text, "x.sino:1:");
  expect_parse_error("alpha=0.5\nn_s=2\nnL=3\n", SinogramFormat::text, "x.sino:3:");
  expect_parse_error("alpha=abc\n", SinogramFormat::text, "x.sino:1:");
  expect_parse_error("alpha=0.5\nn_s=0\n", SinogramFormat::text, "x.sino:2:");
  expect_parse_error(header + "1\n2\n3\n4\n5\n", SinogramFormat::text, "header requires n_s*n_L = 6");
  expect_parse_error(header + "1\n2\n3\n4\n5\n6\n7\n", SinogramFormat::text, "x.sino:12:");
  expect_parse_error(header + "1\n2\nthree\n4\n5\n6\n", SinogramFormat::text, "x.sino:8:");
  expect_parse_error("alpha=0.5\nn_s=2\nn_L=3\nL_min=0.1\nL_max=1.5\n", SinogramFormat::text, "x.sino:5:");
  expect_parse_error(header + std::string(40, 'x'), SinogramFormat::binary, "binary payload has 40 bytes");
}

TEST(SinogramText, ToleratesCrlfAndBlankLines) {
  const Sinogram sino = random_sinogram(2, 3);
  std::ostringstream os;
  write_sinogram(sino, os, SinogramFormat::text);
  std::string text;
  for (char ch : os.str()) {
    if (ch == '\n') text += "\r\n";
    else text += ch;
  }
  text += "\r\n\r\n";
  std::istringstream in(text);
  expect_bit_equal(sino, read_sinogram(in, SinogramFormat::text));
}

using ImageFile = TempDir;

TEST_F(ImageFile, CsvRoundTripAndPgmScaling) {
  ImageGrid img(5, 0.75);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) img.at(i, j) = 0.1 * i - 0.37 * j + 1.0 / 3.0;
  }
  write_csv(img, path("img.csv"));
  const ImageGrid back = read_csv(path("img.csv"));
  ASSERT_EQ(back.n(), 5);
  EXPECT_EQ(back.extent(), 0.75);
  for (std::size_t k = 0; k < img.values().size(); ++k) EXPECT_EQ(back.values()[k], img.values()[k]);
  {
    std::ifstream in(path("img.csv"));
    std::string first;
    std::getline(in, first);
    EXPECT_EQ(first, "n,extent");
  }

  const ValueRange r = write_pgm(img, path("img"));
  EXPECT_EQ(r.min, img.at(0, 4));
  EXPECT_EQ(r.max, img.at(4, 0));
  std::ifstream pgm(path("img.pgm"), std::ios::binary);
  std::string magic;
  int w = 0, h = 0, maxval = 0;
  pgm >> magic >> w >> h >> maxval;
  pgm.get();
  EXPECT_EQ(magic, "P5");
  EXPECT_EQ(w, 5);
  EXPECT_EQ(maxval, 65535);
  std::vector<unsigned char> bytes(50);
  pgm.read(reinterpret_cast<char*>(bytes.data()), 50);
  auto pixel = [&](int row, int col) { return bytes[2 * (row * 5 + col)] * 256 + bytes[2 * (row * 5 + col) + 1]; };
  // First stored row is the top of the image, i.e. largest y.
  EXPECT_EQ(pixel(0, 0), 65535);
  EXPECT_EQ(pixel(4, 4), 0);
  std::ifstream side(path("img.range.txt"));
  std::string lo, hi;
  side >> lo >> hi;
  EXPECT_EQ(lo.rfind("min=", 0), 0u);
  EXPECT_EQ(hi.rfind("max=", 0), 0u);
  EXPECT_EQ(std::stod(hi.substr(4)), r.max);
}

TEST_F(ImageFile, MalformedCsv) {
  {
    std::ofstream out(path("bad.csv"));
    out << "n,extent\n2,0.5\n1,2\n3\n";
  }
  EXPECT_THROW(read_csv(path("bad.csv")), ParseError);
}

}  // namespace
}  // namespace ert
