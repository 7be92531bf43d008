#pragma once

#include <string>

#include "rlw/grid.hpp"

namespace rlw {

/// A field together with the simulation time it was saved at.
struct LoadedField {
    Field u;
    double t = 0.0;
};

/// Writes the text snapshot format:
///   line 1:  RLWFIELD v1
///   line 2:  dim n_x [n_y] a_x b_x [a_y b_y] t
///   then one value per line, row-major.
/// All numbers are printed with enough digits to round-trip exactly.
void write_field(const std::string& path, const Field& u, double t);

/// Reads a snapshot written by write_field and rebuilds its grid. Throws
/// ParseError (with the offending line number) for malformed headers, value
/// count mismatches, or non-finite entries.
LoadedField read_field(const std::string& path);

}  // namespace rlw
