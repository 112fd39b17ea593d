#pragma once

#include <filesystem>

#include "graphla/types.hpp"

namespace graphla {

// Binary PPM (P6) heatmap of a grid, linearly mapped onto a blue-white-red
// ramp between the grid's min and max. No rendering dependency.
void write_ppm(const Mat& grid, const std::filesystem::path& path);

}  // namespace graphla
