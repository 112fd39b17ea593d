#include "graphla/graph_laplacian.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <vector>

#include "graphla/errors.hpp"
#include "graphla/grid.hpp"
#include "graphla/parallel.hpp"
#include "graphla/util.hpp"

namespace graphla {

namespace {

Index pixel_distance(Pixel p, Pixel q, PixelDist dist) {
  const Index di = std::abs(p.row - q.row);
  const Index dj = std::abs(p.col - q.col);
  return dist == PixelDist::L1 ? di + dj : std::max(di, dj);
}

double intensity_weight(double a, double b, double sigma) {
  const double d = a - b;
  return std::exp(-(d * d) / sigma);
}

// Stencil of in-range offsets (di, dj) != (0, 0) with dist <= R.
std::vector<std::pair<Index, Index>> make_stencil(const GraphSpec& spec) {
  const Index reach = static_cast<Index>(std::floor(spec.radius));
  std::vector<std::pair<Index, Index>> offsets;
  for (Index di = -reach; di <= reach; ++di) {
    for (Index dj = -reach; dj <= reach; ++dj) {
      if (di == 0 && dj == 0) continue;
      const Index d = spec.dist == PixelDist::L1
                          ? std::abs(di) + std::abs(dj)
                          : std::max(std::abs(di), std::abs(dj));
      if (static_cast<double>(d) <= spec.radius) offsets.emplace_back(di, dj);
    }
  }
  return offsets;
}

}  // namespace

double edge_weight(const Mat& guide, Pixel p, Pixel q, const GraphSpec& spec) {
  auto in_range = [&](Pixel t) {
    return t.row >= 0 && t.row < guide.rows() && t.col >= 0 && t.col < guide.cols();
  };
  if (!in_range(p) || !in_range(q))
    throw OutOfBounds("edge_weight: pixel outside guide");
  const Index d = pixel_distance(p, q, spec.dist);
  if (d == 0 || static_cast<double>(d) > spec.radius) return 0.0;
  return intensity_weight(guide(p.row, p.col), guide(q.row, q.col), spec.sigma);
}

GraphLaplacian build_laplacian(const Mat& guide, const GraphSpec& spec) {
  if (spec.radius <= 0.0 || spec.sigma <= 0.0)
    throw OutOfBounds("build_laplacian: radius and sigma must be positive");
  if (!all_finite(guide)) throw NonFinite("build_laplacian: guide has NaN/Inf");

  Mat img = spec.normalize_guide ? normalize(guide).values : guide;
  const Index n_t = img.rows();
  const Index n_x = img.cols();
  const Index n = n_t * n_x;
  const auto stencil = make_stencil(spec);

  // Entry counts depend only on bounds, so slot offsets are exact and rows
  // can be filled in parallel without reordering anything.
  std::vector<Index> offset(static_cast<size_t>(n) + 1, 0);
  for (Index j = 0; j < n_x; ++j) {
    for (Index i = 0; i < n_t; ++i) {
      Index count = 1;  // diagonal
      for (const auto& [di, dj] : stencil) {
        const Index qi = i + di, qj = j + dj;
        if (qi >= 0 && qi < n_t && qj >= 0 && qj < n_x) ++count;
      }
      offset[static_cast<size_t>(i + j * n_t) + 1] = count;
    }
  }
  for (size_t k = 1; k < offset.size(); ++k) offset[k] += offset[k - 1];

  std::vector<Triplet> entries(static_cast<size_t>(offset.back()));
  parallel_for(n, [&](Index begin, Index end) {
    for (Index node = begin; node < end; ++node) {
      const Index i = node % n_t;
      const Index j = node / n_t;
      Index slot = offset[static_cast<size_t>(node)];
      double diag = 0.0;
      const Index diag_slot = slot++;
      for (const auto& [di, dj] : stencil) {
        const Index qi = i + di, qj = j + dj;
        if (qi < 0 || qi >= n_t || qj < 0 || qj >= n_x) continue;
        const double w = intensity_weight(img(i, j), img(qi, qj), spec.sigma);
        diag += w;
        entries[static_cast<size_t>(slot++)] =
            Triplet(static_cast<int>(node), static_cast<int>(qi + qj * n_t), -w);
      }
      entries[static_cast<size_t>(diag_slot)] =
          Triplet(static_cast<int>(node), static_cast<int>(node), diag);
    }
  });

  GraphLaplacian lap;
  lap.matrix.resize(n, n);
  lap.matrix.setFromTriplets(entries.begin(), entries.end());
  lap.spec = spec;
  lap.guide_hash = digest(guide);
  lap.n_t = n_t;
  lap.n_x = n_x;
  return lap;
}

Vec apply_laplacian(const GraphLaplacian& lap, const Vec& z) {
  if (z.size() != lap.matrix.cols())
    throw DimensionMismatch("apply_laplacian: vector length != node count");
  return lap.matrix * z;
}

void save_matrix_market(const SpMat& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoFailure("cannot open for writing: " + path.string());
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
  for (Index k = 0; k < m.outerSize(); ++k)
    for (SpMat::InnerIterator it(m, k); it; ++it)
      out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
  if (!out) throw IoFailure("write failed: " + path.string());
}

}  // namespace graphla
