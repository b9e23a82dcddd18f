#ifndef ERT_SINOGRAM_IO_HPP
#define ERT_SINOGRAM_IO_HPP

// Sinogram files. Both variants start with the text header
//   alpha=<float>
//   n_s=<int>
//   n_L=<int>
//   L_min=<float>
//   L_max=<float>
// followed by n_s * n_L values, row-major with s outer:
//   *.sino.txt  one value per line, 17 significant digits
//   *.sino.bin  raw little-endian IEEE-754 doubles

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ert/error.hpp"
#include "ert/transform.hpp"

namespace ert {

enum class SinogramFormat { text, binary };

inline bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

inline SinogramFormat sinogram_format(const std::string& path) {
  if (ends_with(path, ".sino.txt")) return SinogramFormat::text;
  if (ends_with(path, ".sino.bin")) return SinogramFormat::binary;
  throw ConfigError("sinogram path '" + path + "' must end in .sino.txt or .sino.bin");
}

// Whole-string parse; accepts subnormals, unlike std::stod.
inline bool parse_double(const std::string& text, double& v) {
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  return ec == std::errc() && ptr == last && first != last;
}

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline void write_sinogram_header(std::ostream& out, const Sinogram& sino) {
  out << "alpha=" << format_double(sino.geometry().alpha()) << '\n'
      << "n_s=" << sino.n_s() << '\n'
      << "n_L=" << sino.n_L() << '\n'
      << "L_min=" << format_double(sino.L_min()) << '\n'
      << "L_max=" << format_double(sino.L_max()) << '\n';
}

inline std::uint64_t to_little_endian(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t r = 0;
    for (int k = 0; k < 8; ++k) r |= ((v >> (8 * k)) & 0xffu) << (8 * (7 - k));
    return r;
  }
  return v;
}

class LineReader {
 public:
  LineReader(std::istream& in, std::string name) : in_(in), name_(std::move(name)) {}

  std::string next() {
    std::string line;
    ++line_;
    if (!std::getline(in_, line)) fail("unexpected end of file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(name_ + ":" + std::to_string(line_) + ": " + msg);
  }

  std::string value(const std::string& key) {
    const std::string line = next();
    const std::string prefix = key + "=";
    if (line.rfind(prefix, 0) != 0) fail("expected '" + key + "=<value>'");
    return line.substr(prefix.size());
  }

  double number(const std::string& key) {
    double v = 0.0;
    if (!parse_double(value(key), v)) fail("malformed number for '" + key + "'");
    return v;
  }

  int integer(const std::string& key) {
    const std::string text = value(key);
    std::size_t used = 0;
    long v = 0;
    try {
      v = std::stol(text, &used);
    } catch (const std::exception&) {
      fail("malformed integer for '" + key + "'");
    }
    if (used != text.size() || v < 1 || v > (1L << 30)) fail("invalid value for '" + key + "'");
    return static_cast<int>(v);
  }

  int line() const { return line_; }

 private:
  std::istream& in_;
  std::string name_;
  int line_ = 0;
};

}  // namespace detail

inline void write_sinogram(const Sinogram& sino, std::ostream& out, SinogramFormat format) {
  detail::write_sinogram_header(out, sino);
  if (format == SinogramFormat::text) {
    for (double v : sino.values()) out << format_double(v) << '\n';
  } else {
    for (double v : sino.values()) {
      const std::uint64_t bits = detail::to_little_endian(std::bit_cast<std::uint64_t>(v));
      char bytes[8];
      std::memcpy(bytes, &bits, 8);
      out.write(bytes, 8);
    }
  }
}

inline Sinogram read_sinogram(std::istream& in, SinogramFormat format, const std::string& name = "<stream>") {
  detail::LineReader reader(in, name);
  const double alpha = reader.number("alpha");
  const int n_s = reader.integer("n_s");
  const int n_L = reader.integer("n_L");
  const double L_min = reader.number("L_min");
  const double L_max = reader.number("L_max");
  std::optional<Sinogram> built;
  try {
    built.emplace(ScanGeometry(alpha), n_s, n_L, L_min, L_max);
  } catch (const Error& e) {
    reader.fail(std::string("inconsistent header: ") + e.what());
  }
  Sinogram& sino = *built;
  const std::size_t count = sino.values().size();
  if (format == SinogramFormat::text) {
    std::size_t k = 0;
    std::string line;
    int line_no = reader.line();
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      if (k >= count) {
        throw ParseError(name + ":" + std::to_string(line_no) + ": more values than n_s*n_L = " +
                         std::to_string(count));
      }
      if (!parse_double(line, sino.values()[k])) {
        throw ParseError(name + ":" + std::to_string(line_no) + ": malformed value '" + line + "'");
      }
      ++k;
    }
    if (k != count) {
      throw ParseError(name + ":" + std::to_string(line_no) + ": found " + std::to_string(k) +
                       " values, header requires n_s*n_L = " + std::to_string(count));
    }
  } else {
    std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (bytes.size() != count * 8) {
      throw ParseError(name + ":" + std::to_string(reader.line() + 1) + ": binary payload has " +
                       std::to_string(bytes.size()) + " bytes, header requires " + std::to_string(count * 8));
    }
    for (std::size_t k = 0; k < count; ++k) {
      std::uint64_t bits = 0;
      std::memcpy(&bits, bytes.data() + 8 * k, 8);
      sino.values()[k] = std::bit_cast<double>(detail::to_little_endian(bits));
    }
  }
  return std::move(sino);
}

inline void write_sinogram(const Sinogram& sino, const std::string& path) {
  const SinogramFormat format = sinogram_format(path);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write sinogram file '" + path + "'");
  write_sinogram(sino, out, format);
}

inline Sinogram read_sinogram(const std::string& path) {
  const SinogramFormat format = sinogram_format(path);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open sinogram file '" + path + "'");
  return read_sinogram(in, format, path);
}

}  // namespace ert

#endif  // ERT_SINOGRAM_IO_HPP
