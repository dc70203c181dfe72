#include "specreg/mmio.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "specreg/error.hpp"

namespace specreg {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  for (std::string t; ss >> t;) out.push_back(t);
  return out;
}

bool blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return std::isspace(c); });
}

double parse_double(const std::string& tok, std::size_t line) {
  double v = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw FormatError("cannot parse number '" + tok + "'", line);
  }
  return v;
}

long parse_dim(const std::string& tok, std::size_t line) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || v <= 0) {
    throw FormatError("dimension must be a positive integer, got '" + tok + "'", line);
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw Error("format_double: buffer too small");
  return std::string(buf, ptr);
}

DenseMatrix read_matrix(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;

  if (!std::getline(in, line)) throw FormatError("empty input", 1);
  ++lineno;
  const auto head = tokens(lower(line));
  if (head.size() != 5 || head[0] != "%%matrixmarket") {
    throw FormatError("missing %%MatrixMarket header", lineno);
  }
  if (head[1] != "matrix") throw FormatError("object must be 'matrix'", lineno);
  if (head[2] != "array") {
    throw FormatError("only the dense 'array' format is supported", lineno);
  }
  const std::string& field = head[3];
  if (field != "real" && field != "complex" && field != "integer") {
    throw FormatError("unsupported field '" + field + "'", lineno);
  }
  if (head[4] != "general") {
    throw FormatError("only 'general' symmetry is supported", lineno);
  }
  const bool is_complex = field == "complex";

  // Size line: first non-comment, non-blank line.
  long rows = 0, cols = 0;
  for (;;) {
    if (!std::getline(in, line)) throw FormatError("missing size line", lineno + 1);
    ++lineno;
    if (blank(line) || line[0] == '%') continue;
    const auto t = tokens(line);
    if (t.size() != 2) throw FormatError("size line must hold 'rows cols'", lineno);
    rows = parse_dim(t[0], lineno);
    cols = parse_dim(t[1], lineno);
    break;
  }

  const long expected = rows * cols;
  CMatrix m(rows, cols);
  long k = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line) || line[0] == '%') continue;
    const auto t = tokens(line);
    const std::size_t want = is_complex ? 2 : 1;
    if (t.size() != want) {
      throw FormatError("expected " + std::to_string(want) + " value(s) per entry", lineno);
    }
    if (k >= expected) {
      throw InvalidInput("matrix market: more entries than rows*cols=" +
                         std::to_string(expected));
    }
    const double re = parse_double(t[0], lineno);
    const double im = is_complex ? parse_double(t[1], lineno) : 0.0;
    // Column-major entry order.
    m(k % rows, k / rows) = cplx(re, im);
    ++k;
  }
  if (k != expected) {
    throw InvalidInput("matrix market: found " + std::to_string(k) +
                       " entries, expected " + std::to_string(expected));
  }
  return DenseMatrix(std::move(m), is_complex ? Field::Complex : Field::Real);
}

DenseMatrix read_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path.string() + "'");
  return read_matrix(in);
}

void write_matrix(const DenseMatrix& m, std::ostream& out) {
  const bool real = m.is_real();
  out << "%%MatrixMarket matrix array " << (real ? "real" : "complex") << " general\n";
  out << m.rows() << ' ' << m.cols() << '\n';
  for (std::size_t j = 0; j < m.cols(); ++j) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
      const cplx v = m(i, j);
      out << format_double(v.real());
      if (!real) out << ' ' << format_double(v.imag());
      out << '\n';
    }
  }
}

void write_matrix(const DenseMatrix& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write '" + path.string() + "'");
  write_matrix(m, out);
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

}  // namespace specreg
