#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "sympmarg/symplectic.hpp"

namespace sympmarg {

enum class MatrixKind { Covariance, Symplectic };

std::string_view to_string(MatrixKind kind);

/// Text matrix file:
///
///   n 2
///   ordering xpxp
///   kind covariance
///   <2n lines of 2n numbers, row-major>
///
/// Blank lines and text after '#' are ignored. Values are written with 17
/// significant digits so a read-write cycle is value-identical.
struct MatrixFile {
  int n = 0;
  MatrixKind kind = MatrixKind::Covariance;
  Matrix body;
};

void write_matrix(std::ostream& out, const MatrixFile& file);
/// Throws ParseError naming the offending line, row or column.
MatrixFile read_matrix(std::istream& in);

MatrixFile load_matrix(const std::string& path);
void save_matrix(const std::string& path, const MatrixFile& file);

/// "1.5,2,3" -> {1.5, 2, 3}. Throws ParseError naming the bad position.
std::vector<double> parse_vector(std::string_view text);

/// Shortest round-tripping decimal form with 17 significant digits.
std::string format_real(double v);

}  // namespace sympmarg
