#pragma once

#include <ostream>
#include <string>

#include "dephasim/tensor.hpp"

// Deterministic textual formatting shared by the CLI and the tests. CSV and
// matrix dumps must be byte-stable across runs, so every number goes through
// these helpers.
namespace dephasim {

std::string format_real(double value, int significant_digits = 15);
std::string format_complex(Complex value, int significant_digits = 15);  // "re,im"

// Row-major dump, one row per line, entries as "re,im" separated by a space.
void dump_matrix(std::ostream& out, const Matrix& m, int significant_digits = 15);

}  // namespace dephasim
