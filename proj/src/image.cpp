#include "graphla/image.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <vector>

#include "graphla/errors.hpp"

namespace graphla {

void write_ppm(const Mat& grid, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoFailure("cannot open for writing: " + path.string());
  const double lo = grid.minCoeff();
  const double hi = grid.maxCoeff();
  const double span = hi > lo ? hi - lo : 1.0;
  out << "P6\n" << grid.cols() << ' ' << grid.rows() << "\n255\n";
  std::vector<std::uint8_t> row(static_cast<size_t>(grid.cols()) * 3);
  for (Index i = 0; i < grid.rows(); ++i) {
    for (Index j = 0; j < grid.cols(); ++j) {
      const double t = (grid(i, j) - lo) / span;  // 0 = blue, 0.5 = white, 1 = red
      double r, g, b;
      if (t < 0.5) {
        const double u = t * 2.0;
        r = u;
        g = u;
        b = 1.0;
      } else {
        const double u = (t - 0.5) * 2.0;
        r = 1.0;
        g = 1.0 - u;
        b = 1.0 - u;
      }
      const size_t base = static_cast<size_t>(j) * 3;
      row[base] = static_cast<std::uint8_t>(std::clamp(r, 0.0, 1.0) * 255.0 + 0.5);
      row[base + 1] = static_cast<std::uint8_t>(std::clamp(g, 0.0, 1.0) * 255.0 + 0.5);
      row[base + 2] = static_cast<std::uint8_t>(std::clamp(b, 0.0, 1.0) * 255.0 + 0.5);
    }
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size()));
  }
  if (!out) throw IoFailure("write failed: " + path.string());
}

}  // namespace graphla
