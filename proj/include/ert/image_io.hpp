#ifndef ERT_IMAGE_IO_HPP
#define ERT_IMAGE_IO_HPP

// Image grid exports.
//   CSV: line 1 "n,extent", line 2 the two values, then n rows of n values
//        (row 0 = smallest y), 17 significant digits.
//   PGM: binary 16-bit (P5, maxval 65535, most significant byte first), top
//        row = largest y, values mapped affinely from [min, max] to
//        [0, 65535]; min and max go to a sidecar "<stem>.range.txt".

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>

#include "ert/error.hpp"
#include "ert/phantom.hpp"

namespace ert {

inline void write_csv(const ImageGrid& grid, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out.precision(17);
  out << "n,extent\n" << grid.n() << ',' << grid.extent() << '\n';
  for (int i = 0; i < grid.n(); ++i) {
    for (int j = 0; j < grid.n(); ++j) {
      if (j) out << ',';
      out << grid.at(i, j);
    }
    out << '\n';
  }
}

inline ImageGrid read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != "n,extent") throw ParseError(path + ":1: expected header 'n,extent'");
  int n = 0;
  double extent = 0.0;
  char comma = 0;
  if (!std::getline(in, line)) throw ParseError(path + ":2: missing grid size line");
  {
    std::istringstream ls(line);
    if (!(ls >> n >> comma >> extent) || comma != ',' || n < 1 || !(extent > 0.0)) {
      throw ParseError(path + ":2: malformed grid size line");
    }
  }
  ImageGrid grid(n, extent);
  for (int i = 0; i < n; ++i) {
    if (!std::getline(in, line)) throw ParseError(path + ":" + std::to_string(i + 3) + ": missing row");
    std::istringstream ls(line);
    std::string cell;
    int j = 0;
    while (std::getline(ls, cell, ',')) {
      if (j >= n) throw ParseError(path + ":" + std::to_string(i + 3) + ": too many values");
      try {
        grid.at(i, j++) = std::stod(cell);
      } catch (const std::exception&) {
        throw ParseError(path + ":" + std::to_string(i + 3) + ": bad value '" + cell + "'");
      }
    }
    if (j != n) throw ParseError(path + ":" + std::to_string(i + 3) + ": too few values");
  }
  return grid;
}

struct ValueRange {
  double min = 0.0;
  double max = 0.0;
};

inline ValueRange value_range(const ImageGrid& grid) {
  const auto [lo, hi] = std::minmax_element(grid.values().begin(), grid.values().end());
  return {*lo, *hi};
}

// Writes `<stem>.pgm` and `<stem>.range.txt`; returns the mapped range.
inline ValueRange write_pgm(const ImageGrid& grid, const std::string& stem) {
  const ValueRange r = value_range(grid);
  const double span = r.max - r.min;
  std::ofstream out(stem + ".pgm", std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + stem + ".pgm'");
  out << "P5\n" << grid.n() << ' ' << grid.n() << "\n65535\n";
  for (int i = grid.n() - 1; i >= 0; --i) {
    for (int j = 0; j < grid.n(); ++j) {
      const double t = span > 0.0 ? (grid.at(i, j) - r.min) / span : 0.0;
      const auto v = static_cast<std::uint16_t>(std::lround(std::clamp(t, 0.0, 1.0) * 65535.0));
      const char bytes[2] = {static_cast<char>(v >> 8), static_cast<char>(v & 0xff)};
      out.write(bytes, 2);
    }
  }
  std::ofstream side(stem + ".range.txt");
  if (!side) throw ConfigError("cannot write '" + stem + ".range.txt'");
  side.precision(17);
  side << "min=" << r.min << "\nmax=" << r.max << '\n';
  return r;
}

}  // namespace ert

#endif  // ERT_IMAGE_IO_HPP
