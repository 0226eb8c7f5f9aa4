#pragma once

// Matrix and problem-file I/O for the command line tool.

#include "mlmat/fde.hpp"
#include "mlmat/funm.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace mlmat::io {

/// Parses "a+bi", "a-bi", "bi", "a" (also 'j'); throws ParseError.
cplx parse_complex(const std::string& token);

/// 17 significant digits, lowercase scientific notation.
std::string format_real(double x);
/// "a+bi" with both parts from format_real.
std::string format_complex(cplx z);

/// Dense CSV (optional header row of non-numeric tokens) or Matrix Market
/// array format (real or complex). Throws ParseError / DimensionError.
CMatrix read_matrix(std::istream& in);
CMatrix read_matrix_file(const std::string& path);

/// CSV with a header row c0,c1,...; real entries when the matrix has no
/// imaginary part, "a+bi" tokens otherwise.
void write_matrix(std::ostream& out, const CMatrix& M);

/// "start:step:end", a comma separated list, or a single value.
std::vector<double> parse_time_grid(const std::string& spec);

struct FdeProblem {
    enum class Type { Multiterm, System } type = Type::Multiterm;
    MultitermFde multiterm;      // type == Multiterm
    LinearFdeSystem system;      // type == System
    std::vector<double> poly;    // forcing coefficients (may be empty)
    RVector direction;           // forcing direction for systems
};

/// JSON problem description; see README for the schema. Throws SchemaError
/// naming the offending field, or IrrationalOrder when a real alpha of a
/// multiterm problem is not a ratio of small integers.
FdeProblem parse_problem(const std::string& json_text);
FdeProblem read_problem_file(const std::string& path);

/// Best rational approximation with denominator <= max_den, accepted when
/// it reproduces x to 1e-12; throws IrrationalOrder otherwise.
Rational rational_from_double(double x, long max_den = 1000);

}  // namespace mlmat::io
