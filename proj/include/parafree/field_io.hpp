#pragma once

/// PARAFREE-FIELD v1 container: one ASCII header line followed by raw
/// little-endian doubles, t-major then row-major. Header floats print with
/// %.17g, so a write/read cycle reproduces the grid and payload bitwise.

#include <string>

#include "parafree/grid.hpp"

namespace parafree {

void write_field(const Field& f, const std::string& path);
Field read_field(const std::string& path);

/// Masks travel as 0/1 fields in the same container.
void write_mask(const Mask& m, const std::string& path);
Mask read_mask(const std::string& path);

}  // namespace parafree
