#pragma once

// Binary and CSV dumps of scalar fields.
//
// Binary layout, all little-endian:
//   u64 n | u64 size[2n+1] | f64 spacing[2n+1] | f64 lower[2n+1] | f64 values[...]
// Values follow the grid's row-major node order (t fastest).

#include <string>

#include "solab/grid.hpp"

namespace solab {

/// Throws std::runtime_error on IO failure.
void write_field_binary(const std::string& path, const ScalarField& u);
ScalarField read_field_binary(const std::string& path);

/// Header `x1,...,x2n,t,value`, one node per row, 17 significant digits.
void write_field_csv(const std::string& path, const ScalarField& u);

}  // namespace solab
