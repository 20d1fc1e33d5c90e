#include "laoa/matrix_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "laoa/error.hpp"

namespace laoa {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

bool parse_double(std::string_view token, double& out) {
  if (token.empty()) return false;
  const char* end = token.data() + token.size();
  const auto res = std::from_chars(token.data(), end, out);
  return res.ec == std::errc() && res.ptr == end;
}

void write_matrix(std::ostream& out, const SnapshotMatrix& snap) {
  out << "aoa-matrix 1 " << snap.data.rows() << ' ' << snap.data.cols() << ' '
      << (snap.subarray == Subarray::Z ? 'Z' : 'X') << '\n';
  for (Eigen::Index i = 0; i < snap.data.rows(); ++i) {
    for (Eigen::Index k = 0; k < snap.data.cols(); ++k) {
      if (k > 0) out << ' ';
      const Complex v = snap.data(i, k);
      out << format_double(v.real()) << ':' << format_double(v.imag());
    }
    out << '\n';
  }
}

namespace {

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

std::vector<Token> split(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

[[noreturn]] void parse_error(std::size_t line, std::size_t col, const std::string& msg) {
  throw Error(ErrorCode::ParseError,
              "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg);
}

bool skippable(std::string_view line) {
  for (char c : line) {
    if (c == '#') return true;
    if (c != ' ' && c != '\t' && c != '\r') return false;
  }
  return true;
}

long parse_dimension(const Token& t, std::size_t line) {
  long v = 0;
  const char* end = t.text.data() + t.text.size();
  const auto res = std::from_chars(t.text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end || v < 1) {
    parse_error(line, t.column, "expected a positive dimension, got '" + std::string(t.text) + "'");
  }
  return v;
}

}  // namespace

SnapshotMatrix read_matrix(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++lineno;
      if (!skippable(line)) return true;
    }
    return false;
  };

  if (!next_line()) throw Error(ErrorCode::ParseError, "missing aoa-matrix header");
  const auto header = split(line);
  if (header.size() != 5 || header[0].text != "aoa-matrix") {
    parse_error(lineno, 1, "expected 'aoa-matrix 1 <rows> <cols> <Z|X>'");
  }
  if (header[1].text != "1") {
    parse_error(lineno, header[1].column,
                "unsupported format version '" + std::string(header[1].text) + "'");
  }
  const long rows = parse_dimension(header[2], lineno);
  const long cols = parse_dimension(header[3], lineno);
  SnapshotMatrix snap;
  if (header[4].text == "Z") {
    snap.subarray = Subarray::Z;
  } else if (header[4].text == "X") {
    snap.subarray = Subarray::X;
  } else {
    parse_error(lineno, header[4].column,
                "subarray must be Z or X, got '" + std::string(header[4].text) + "'");
  }

  snap.data.resize(rows, cols);
  for (long i = 0; i < rows; ++i) {
    if (!next_line()) {
      throw Error(ErrorCode::DimensionMismatch, "header declares " + std::to_string(rows) +
                                                    " rows, file ends after " +
                                                    std::to_string(i));
    }
    const auto tokens = split(line);
    if (static_cast<long>(tokens.size()) != cols) {
      parse_error(lineno, 1,
                  "row " + std::to_string(i + 1) + " has " + std::to_string(tokens.size()) +
                      " entries, header declares " + std::to_string(cols));
    }
    for (long k = 0; k < cols; ++k) {
      const auto& t = tokens[static_cast<std::size_t>(k)];
      const auto colon = t.text.find(':');
      double re = 0.0;
      double im = 0.0;
      if (colon == std::string_view::npos || !parse_double(t.text.substr(0, colon), re) ||
          !parse_double(t.text.substr(colon + 1), im)) {
        parse_error(lineno, t.column,
                    "row " + std::to_string(i + 1) + ": malformed entry '" + std::string(t.text) +
                        "', expected <re>:<im>");
      }
      if (!std::isfinite(re) || !std::isfinite(im)) {
        parse_error(lineno, t.column, "row " + std::to_string(i + 1) + ": non-finite entry");
      }
      snap.data(i, k) = Complex(re, im);
    }
  }
  if (next_line()) {
    throw Error(ErrorCode::DimensionMismatch,
                "line " + std::to_string(lineno) + ": data beyond the declared " +
                    std::to_string(rows) + " rows");
  }
  return snap;
}

void write_matrix_file(const SnapshotMatrix& snap, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  write_matrix(out, snap);
  if (!out) throw Error(ErrorCode::IoError, "write to " + path.string() + " failed");
}

SnapshotMatrix read_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return read_matrix(in);
}

}  // namespace laoa
