#include "dlbiht/matrix_io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

namespace dlbiht {

namespace {

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_matrix(std::ostream& os, const Matrix& m) {
  os << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) os << ' ';
      os << format_value(m(r, c));
    }
    os << '\n';
  }
}

Matrix read_matrix(std::istream& is) {
  long long rows = -1, cols = -1;
  if (!(is >> rows >> cols) || rows < 0 || cols < 0) {
    throw ParameterError("matrix file: malformed header");
  }
  Matrix m(rows, cols);
  for (long long r = 0; r < rows; ++r) {
    for (long long c = 0; c < cols; ++c) {
      std::string token;
      if (!(is >> token)) {
        throw ParameterError("matrix file: truncated at row " + std::to_string(r));
      }
      try {
        std::size_t used = 0;
        m(r, c) = std::stod(token, &used);
        if (used != token.size()) throw std::invalid_argument(token);
      } catch (const std::exception&) {
        throw ParameterError("matrix file: bad value '" + token + "'");
      }
    }
  }
  return m;
}

void save_matrix(const std::filesystem::path& path, const Matrix& m) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  write_matrix(os, m);
  if (!os) throw IoError("write failed: " + path.string());
}

Matrix load_matrix(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string() + " for reading");
  return read_matrix(is);
}

void save_trace(const std::filesystem::path& path, std::span<const double> values) {
  Matrix m(static_cast<Eigen::Index>(values.size()), 1);
  for (std::size_t i = 0; i < values.size(); ++i) m(static_cast<Eigen::Index>(i), 0) = values[i];
  save_matrix(path, m);
}

}  // namespace dlbiht
