#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "bordeig/types.hpp"

namespace bordeig {

/// Shortest representation that still round-trips the double exactly.
std::string fmt17(double x);

/// Canonical complex literal: `a` when imaginary part is zero, `bi` when the
/// real part is zero, `a+bi` / `a-bi` otherwise.
std::string format_complex(Complex c);

/// Accepts the literal grammar `a`, `a+bi`, `a-bi`, `bi` with decimal parts
/// and optional exponents. Throws parse_error on anything else.
Complex parse_complex(std::string_view token);

/// MatrixFile format: a header line `cmat <rows> <cols>`, then rows*cols
/// whitespace-separated complex literals. Lines starting with `#` are ignored.
ComplexMatrix read_matrix(std::istream& in);
ComplexMatrix read_matrix_file(const std::string& path);
void write_matrix(const ComplexMatrix& m, std::ostream& out);
void write_matrix_file(const ComplexMatrix& m, const std::string& path);

/// FNV-1a 64-bit digest (16 hex chars) of the canonical serialization.
std::string matrix_digest(const ComplexMatrix& m);

}  // namespace bordeig
