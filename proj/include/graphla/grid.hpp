#pragma once

#include <filesystem>
#include <string>

#include "graphla/types.hpp"

namespace graphla {

struct Normalized {
  Mat values;
  double mean = 0.0;
  double std = 1.0;  // population convention (divide by count)
};

// Shifts/scales to sample mean 0 and population standard deviation 1.
// The returned (mean, std) invert the map exactly. Throws ZeroVariance on
// constant input.
Normalized normalize(const Mat& grid);

// Grid file I/O. The binary format is canonical: magic "GRD1", two 64-bit
// little-endian unsigned sizes (rows, cols), then rows*cols IEEE-754
// binary64 values in row-major order. Files whose first bytes are not the
// magic are parsed as headerless CSV (comma-separated columns, one row per
// line). save_grid picks CSV for a ".csv" extension, binary otherwise;
// both round-trip finite doubles bit-exactly.
Mat load_grid(const std::filesystem::path& path);
void save_grid(const Mat& grid, const std::filesystem::path& path);

}  // namespace graphla
