#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "specreg/matrix.hpp"

namespace specreg {

// Matrix Market dense "array" format, fields real/integer/complex, general
// symmetry. Values are written in shortest round-trip decimal form, so
// read(write(M)) == M bit for bit.

DenseMatrix read_matrix(std::istream& in);
DenseMatrix read_matrix(const std::filesystem::path& path);

void write_matrix(const DenseMatrix& m, std::ostream& out);
void write_matrix(const DenseMatrix& m, const std::filesystem::path& path);

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

}  // namespace specreg
