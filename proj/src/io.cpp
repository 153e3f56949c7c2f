#include "sympmarg/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace sympmarg {
namespace {

bool parse_real(std::string_view s, double& v) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(v);
}

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

}  // namespace

std::string_view to_string(MatrixKind kind) {
  return kind == MatrixKind::Covariance ? "covariance" : "symplectic";
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_matrix(std::ostream& out, const MatrixFile& file) {
  out << "n " << file.n << "\nordering xpxp\nkind " << to_string(file.kind) << '\n';
  for (Eigen::Index i = 0; i < file.body.rows(); ++i) {
    for (Eigen::Index j = 0; j < file.body.cols(); ++j) out << (j ? " " : "") << format_real(file.body(i, j));
    out << '\n';
  }
}

MatrixFile read_matrix(std::istream& in) {
  MatrixFile file;
  bool have_n = false, have_ordering = false, have_kind = false;
  int row = 0, line_no = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream tokens(line);
    std::string first;
    if (!(tokens >> first)) continue;
    const std::string where = "line " + std::to_string(line_no);
    if (first == "n" || first == "ordering" || first == "kind") {
      if (row > 0) parse_fail(where + ": header field '" + first + "' after the matrix body");
      std::string value, extra;
      if (!(tokens >> value) || (tokens >> extra)) parse_fail(where + ": expected '" + first + " <value>'");
      if (first == "n") {
        const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), file.n);
        if (ec != std::errc() || ptr != value.data() + value.size() || file.n <= 0)
          parse_fail(where + ": n must be a positive integer");
        file.body = Matrix::Zero(2 * file.n, 2 * file.n);
        have_n = true;
      } else if (first == "ordering") {
        if (value != "xpxp") parse_fail(where + ": ordering must be xpxp");
        have_ordering = true;
      } else {
        if (value == "covariance") file.kind = MatrixKind::Covariance;
        else if (value == "symplectic") file.kind = MatrixKind::Symplectic;
        else parse_fail(where + ": kind must be covariance or symplectic");
        have_kind = true;
      }
      continue;
    }
    if (!have_n || !have_ordering || !have_kind) parse_fail(where + ": matrix body before the complete header (n, ordering, kind)");
    const int dim = 2 * file.n;
    if (row >= dim) parse_fail(where + ": more than " + std::to_string(dim) + " rows");
    int col = 0;
    for (std::string tok = first;; ) {
      if (col >= dim) parse_fail("row " + std::to_string(row + 1) + " (" + where + "): more than " + std::to_string(dim) + " columns");
      double v = 0.0;
      if (!parse_real(tok, v))
        parse_fail("row " + std::to_string(row + 1) + ", column " + std::to_string(col + 1) + " (" + where + "): '" + tok + "' is not a finite number");
      file.body(row, col++) = v;
      if (!(tokens >> tok)) break;
    }
    if (col != dim)
      parse_fail("row " + std::to_string(row + 1) + " (" + where + "): expected " + std::to_string(dim) + " columns, found " + std::to_string(col));
    ++row;
  }
  if (!have_n || !have_ordering || !have_kind) parse_fail("incomplete header: need n, ordering and kind");
  if (row != 2 * file.n) parse_fail("expected " + std::to_string(2 * file.n) + " rows, found " + std::to_string(row));
  return file;
}

MatrixFile load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) parse_fail("cannot open '" + path + "'");
  return read_matrix(in);
}

void save_matrix(const std::string& path, const MatrixFile& file) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write '" + path + "'");
  write_matrix(out, file);
}

std::vector<double> parse_vector(std::string_view text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = text.find(',', pos);
    std::string_view tok = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    double v = 0.0;
    if (!parse_real(tok, v))
      parse_fail("entry " + std::to_string(out.size() + 1) + " ('" + std::string(tok) + "') is not a finite number");
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace sympmarg
