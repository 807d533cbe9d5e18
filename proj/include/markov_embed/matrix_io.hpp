#pragma once

#include <string>
#include <string_view>

#include "markov_embed/matrix.hpp"

namespace markov {

/// Parses either {"dim": d, "rows": [[...], ...]} JSON or d lines of d
/// comma-separated values. The format is chosen from the first non-blank
/// character. Errors carry a 1-based line and column.
SquareMatrix parse_matrix(std::string_view text);
SquareMatrix read_matrix_file(const std::string& path);

/// JSON with 17 significant digits, so parse_matrix(to_json(m)) == m exactly.
std::string matrix_to_json(const Matrix& m);
std::string matrix_to_csv(const Matrix& m);

/// Formats a double with %.17g.
std::string format_exact(double v);

/// 64-bit FNV-1a over the CSV serialisation, as 16 hex digits.
std::string matrix_digest(const Matrix& m);

}  // namespace markov
