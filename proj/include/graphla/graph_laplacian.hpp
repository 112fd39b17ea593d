#pragma once

#include <cstdint>
#include <filesystem>

#include "graphla/types.hpp"

namespace graphla {

enum class PixelDist { L1, Linf };

struct GraphSpec {
  double radius = 2.0;   // max pixel distance for an edge, closed interval
  double sigma = 0.25;   // intensity scale in exp(-|dI|^2 / sigma)
  PixelDist dist = PixelDist::Linf;
  bool normalize_guide = true;
};

struct Pixel {
  Index row = 0;
  Index col = 0;
};

// Graph Laplacian of the grid graph induced by a guide image: nodes are
// pixels, edges connect pixels within the spec radius, and each edge is
// weighted by how similar the guide intensities are. Acting on a flattened
// image z it computes sum_{q~p} w(p,q) (z(p) - z(q)) per node, so the
// matrix is symmetric, has zero row sums, and is positive semidefinite.
struct GraphLaplacian {
  SpMat matrix;  // (n_t*n_x) x (n_t*n_x), column-major node order i + j*n_t
  GraphSpec spec;
  std::uint64_t guide_hash = 0;
  Index n_t = 0;
  Index n_x = 0;
};

// Weight between two pixels of a guide image: 0 when the pixel distance is
// 0 or exceeds spec.radius, exp(-|I(p)-I(q)|^2 / sigma) otherwise. The
// guide is expected pre-normalized when spec.normalize_guide is set.
double edge_weight(const Mat& guide, Pixel p, Pixel q, const GraphSpec& spec);

GraphLaplacian build_laplacian(const Mat& guide, const GraphSpec& spec = {});

Vec apply_laplacian(const GraphLaplacian& lap, const Vec& z);

// Coordinate-format Matrix Market dump, handy for inspecting small graphs.
void save_matrix_market(const SpMat& m, const std::filesystem::path& path);

}  // namespace graphla
