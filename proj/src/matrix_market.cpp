#include "qk/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "qk/errors.hpp"

namespace qk {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

bool next_data_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    std::size_t i = 0;
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    if (i == line.size()) continue;
    if (line[i] == '%') continue;
    return true;
  }
  return false;
}

}  // namespace

dense::Matrix load_matrix(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw ParseError("matrix market: empty input");
  std::istringstream banner(line);
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  if (lower(tag) != "%%matrixmarket" || lower(object) != "matrix")
    throw ParseError("matrix market: bad banner: " + line);
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  const bool coordinate = format == "coordinate";
  if (!coordinate && format != "array")
    throw ParseError("matrix market: unsupported format: " + format);
  const bool complex_field = field == "complex";
  const bool pattern = field == "pattern";
  if (!complex_field && field != "real" && field != "integer" && !pattern)
    throw ParseError("matrix market: unsupported field: " + field);
  if (symmetry != "general" && symmetry != "symmetric" &&
      symmetry != "skew-symmetric" && symmetry != "hermitian")
    throw ParseError("matrix market: unsupported symmetry: " + symmetry);

  if (!next_data_line(in, line))
    throw ParseError("matrix market: missing size line");
  std::istringstream sizes(line);
  long rows = 0, cols = 0, nnz = 0;
  if (coordinate) {
    if (!(sizes >> rows >> cols >> nnz))
      throw ParseError("matrix market: bad size line: " + line);
  } else {
    if (!(sizes >> rows >> cols))
      throw ParseError("matrix market: bad size line: " + line);
  }
  if (rows <= 0 || cols <= 0)
    throw ParseError("matrix market: nonpositive dimensions");
  if (rows != cols) throw NonSquare("matrix market: matrix is not square");

  dense::Matrix m(static_cast<std::size_t>(rows),
                  static_cast<std::size_t>(cols));

  auto place = [&](long i, long j, cplx v) {
    m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = v;
    if (i != j) {
      if (symmetry == "symmetric")
        m(static_cast<std::size_t>(j), static_cast<std::size_t>(i)) = v;
      else if (symmetry == "skew-symmetric")
        m(static_cast<std::size_t>(j), static_cast<std::size_t>(i)) = -v;
      else if (symmetry == "hermitian")
        m(static_cast<std::size_t>(j), static_cast<std::size_t>(i)) =
            std::conj(v);
    }
  };

  if (coordinate) {
    for (long e = 0; e < nnz; ++e) {
      if (!next_data_line(in, line))
        throw ParseError("matrix market: unexpected end of entries");
      std::istringstream entry(line);
      long i = 0, j = 0;
      if (!(entry >> i >> j))
        throw ParseError("matrix market: bad entry: " + line);
      double re = 1.0, im = 0.0;
      if (!pattern) {
        if (!(entry >> re))
          throw ParseError("matrix market: bad entry value: " + line);
        if (complex_field && !(entry >> im))
          throw ParseError("matrix market: missing imaginary part: " + line);
      }
      if (i < 1 || i > rows || j < 1 || j > cols)
        throw ParseError("matrix market: index out of range: " + line);
      place(i - 1, j - 1, cplx{re, im});
    }
  } else {
    // Array format stores columns contiguously. Symmetric variants store
    // the lower triangle only.
    const bool lower_only = symmetry != "general";
    for (long j = 0; j < cols; ++j) {
      const long i0 = lower_only ? j : 0;
      for (long i = i0; i < rows; ++i) {
        if (!next_data_line(in, line))
          throw ParseError("matrix market: unexpected end of array data");
        std::istringstream entry(line);
        double re = 0.0, im = 0.0;
        if (!(entry >> re))
          throw ParseError("matrix market: bad array value: " + line);
        if (complex_field && !(entry >> im))
          throw ParseError("matrix market: missing imaginary part: " + line);
        place(i, j, cplx{re, im});
      }
    }
  }
  return m;
}

std::unique_ptr<DenseBlockOperator> load_block_matrix(std::istream& in,
                                                      std::size_t n1) {
  dense::Matrix m = load_matrix(in);
  const std::size_t n = m.rows();
  if (n1 < 1 || n1 >= n) throw BadSplit("split must satisfy 1 <= n1 < n");
  return std::make_unique<DenseBlockOperator>(std::move(m), n1);
}

std::unique_ptr<DenseBlockOperator> load_block_matrix(const std::string& path,
                                                      std::size_t n1) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  return load_block_matrix(in, n1);
}

void save_matrix_coordinate(std::ostream& out, const dense::Matrix& m) {
  std::size_t nnz = 0;
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (std::size_t i = 0; i < m.rows(); ++i)
      if (m(i, j) != cplx{0.0, 0.0}) ++nnz;
  out << "%%MatrixMarket matrix coordinate complex general\n";
  out << m.rows() << ' ' << m.cols() << ' ' << nnz << '\n';
  char buf[128];
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (std::size_t i = 0; i < m.rows(); ++i) {
      const cplx v = m(i, j);
      if (v == cplx{0.0, 0.0}) continue;
      std::snprintf(buf, sizeof(buf), "%zu %zu %.16e %.16e\n", i + 1, j + 1,
                    v.real(), v.imag());
      out << buf;
    }
}

}  // namespace qk
