#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "graphla/errors.hpp"
#include "graphla/graph_laplacian.hpp"
#include "graphla/grid.hpp"
#include "graphla/util.hpp"
#include "oracles.hpp"

using namespace graphla;

namespace {

GraphSpec spec_with(double r, double sigma, PixelDist d, bool norm = false) {
  GraphSpec s;
  s.radius = r;
  s.sigma = sigma;
  s.dist = d;
  s.normalize_guide = norm;
  return s;
}

}  // namespace

TEST_SUITE("graph_laplacian") {
  TEST_CASE("edge weight basics") {
    Mat guide(2, 2);
    guide << 0, 1, 1, 0;
    const GraphSpec spec = spec_with(1, 1.0, PixelDist::L1);
    CHECK(edge_weight(guide, {0, 0}, {0, 0}, spec) == 0.0);           // distance 0
    CHECK(edge_weight(guide, {0, 0}, {1, 1}, spec) == 0.0);           // beyond R in L1
    CHECK(edge_weight(guide, {0, 1}, {1, 1}, spec) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-13));            // gap 1, sigma 1
    Mat flat = Mat::Zero(2, 2);
    CHECK(edge_weight(flat, {0, 0}, {0, 1}, spec) == 1.0);            // equal intensity
    CHECK_THROWS_AS(edge_weight(guide, {0, 0}, {2, 0}, spec), OutOfBounds);
  }

  TEST_CASE("two-pixel guide assembles the hand result") {
    Mat guide(2, 1);
    guide << 0, 1;
    const GraphLaplacian lap =
        build_laplacian(guide, spec_with(1, 1.0, PixelDist::L1));
    const double w = std::exp(-1.0);
    const Mat dense = Mat(lap.matrix);
    CHECK(dense(0, 0) == doctest::Approx(w));
    CHECK(dense(0, 1) == doctest::Approx(-w));
    CHECK(dense(1, 0) == doctest::Approx(-w));
    CHECK(dense(1, 1) == doctest::Approx(w));
  }

  TEST_CASE("constant guide is annihilated") {
    Mat guide = Mat::Constant(5, 4, 3.5);
    const GraphLaplacian lap = build_laplacian(guide, spec_with(2, 0.25, PixelDist::Linf));
    const Vec z = flatten(guide);
    CHECK(apply_laplacian(lap, z).lpNorm<Eigen::Infinity>() < 1e-12);
    CHECK_THROWS_AS(build_laplacian(guide, GraphSpec{}), ZeroVariance);
  }

  TEST_CASE("three-intensity block pattern weights") {
    // concentric intensity regions: equal pixels connect with weight 1,
    // cross-region weights drop by exp(-gap^2/sigma)
    Mat guide = Mat::Zero(7, 7);
    guide.block(1, 1, 5, 5).setConstant(0.5);
    guide.block(2, 2, 3, 3).setConstant(1.0);
    const GraphSpec spec = spec_with(1, 0.5, PixelDist::L1);
    CHECK(edge_weight(guide, {2, 2}, {2, 3}, spec) == 1.0);  // inside middle ring
    CHECK(edge_weight(guide, {3, 3}, {3, 4}, spec) == 1.0);  // inside core
    const double cross = std::exp(-0.25 / 0.5);
    CHECK(edge_weight(guide, {1, 1}, {0, 1}, spec) == doctest::Approx(cross));
    CHECK(edge_weight(guide, {2, 1}, {2, 2}, spec) == doctest::Approx(cross));
  }

  TEST_CASE("matches brute force on random guides") {
    NormalSampler rng(3);
    for (int trial = 0; trial < 4; ++trial) {
      const Mat guide = rng.matrix(3 + trial, 3);
      const GraphSpec spec = spec_with(1 + trial % 2, 0.5,
                                       trial % 2 ? PixelDist::L1 : PixelDist::Linf);
      const GraphLaplacian lap = build_laplacian(guide, spec);
      const Vec z = rng.matrix(guide.size(), 1);
      const Vec got = apply_laplacian(lap, z);
      const Vec want = oracles::laplacian_apply_bruteforce(guide, z, spec);
      CHECK((got - want).lpNorm<Eigen::Infinity>() < 1e-12);
    }
  }

  TEST_CASE("symmetry, nullspace, and PSD on random guides") {
    NormalSampler rng(17);
    for (int trial = 0; trial < 6; ++trial) {
      const Mat guide = rng.matrix(12, 9);
      const GraphLaplacian lap =
          build_laplacian(guide, spec_with(2, 0.25, PixelDist::Linf, true));
      const SpMat diff = SpMat(lap.matrix - SpMat(lap.matrix.transpose()));
      double asym = 0.0;
      for (Index k = 0; k < diff.outerSize(); ++k)
        for (SpMat::InnerIterator it(diff, k); it; ++it)
          asym = std::max(asym, std::abs(it.value()));
      CHECK(asym == 0.0);

      const Vec ones = Vec::Ones(lap.matrix.cols());
      CHECK((lap.matrix * ones).lpNorm<Eigen::Infinity>() <= 1e-10);

      Eigen::SelfAdjointEigenSolver<Mat> eig(Mat(lap.matrix));
      CHECK(eig.eigenvalues().minCoeff() >= -1e-8);
    }
  }

  TEST_CASE("off-diagonal entries are -w with w in (0,1]") {
    NormalSampler rng(23);
    const Mat guide = rng.matrix(8, 8);
    const GraphLaplacian lap =
        build_laplacian(guide, spec_with(2, 0.25, PixelDist::Linf, true));
    for (Index k = 0; k < lap.matrix.outerSize(); ++k)
      for (SpMat::InnerIterator it(lap.matrix, k); it; ++it) {
        if (it.row() == it.col()) continue;
        CHECK(it.value() <= 0.0);
        CHECK(it.value() >= -1.0);
        CHECK(it.value() < 0.0);  // weights never vanish on finite guides
      }
  }

  TEST_CASE("interior neighbor counts: 4 for L1 R=1, 8 for Linf R=1") {
    NormalSampler rng(5);
    const Mat guide = rng.matrix(6, 6);
    for (auto dist : {PixelDist::L1, PixelDist::Linf}) {
      const GraphLaplacian lap = build_laplacian(guide, spec_with(1, 1.0, dist));
      const Index node = 2 + 2 * 6;  // interior pixel (2,2)
      Index neighbors = 0;
      for (SpMat::InnerIterator it(lap.matrix, node); it; ++it)
        if (it.col() != node) ++neighbors;
      CHECK(neighbors == (dist == PixelDist::L1 ? 4 : 8));
    }
  }

  TEST_CASE("piecewise-constant guide beats its noisy versions in the pseudo-metric") {
    // ||Lap x||_1 should grow once independent noise is added to x.
    Mat guide = Mat::Zero(12, 10);
    guide.topRows(6).setConstant(1.0);
    guide.bottomRows(6).setConstant(-1.0);
    const GraphLaplacian lap =
        build_laplacian(guide, spec_with(2, 0.25, PixelDist::Linf, false));
    const double base = apply_laplacian(lap, flatten(guide)).lpNorm<1>();
    NormalSampler rng(31);
    int wins = 0;
    for (int trial = 0; trial < 20; ++trial) {
      const Mat noisy = guide + 0.1 * rng.matrix(guide.rows(), guide.cols());
      const double perturbed = apply_laplacian(lap, flatten(noisy)).lpNorm<1>();
      if (perturbed >= base) ++wins;
    }
    CHECK(wins >= 18);
  }

  TEST_CASE("sparsity pattern depends only on R and dist") {
    NormalSampler rng(41);
    const GraphSpec spec = spec_with(2, 0.25, PixelDist::Linf, true);
    const GraphLaplacian a = build_laplacian(rng.matrix(9, 7), spec);
    const GraphLaplacian b = build_laplacian(rng.matrix(9, 7), spec);
    REQUIRE(a.matrix.nonZeros() == b.matrix.nonZeros());
    for (Index k = 0; k < a.matrix.outerSize(); ++k) {
      SpMat::InnerIterator ia(a.matrix, k), ib(b.matrix, k);
      for (; ia && ib; ++ia, ++ib) {
        CHECK(ia.row() == ib.row());
        CHECK(ia.col() == ib.col());
      }
    }
  }

  TEST_CASE("matrix market export looks sane") {
    Mat guide(2, 1);
    guide << 0, 1;
    const GraphLaplacian lap = build_laplacian(guide, spec_with(1, 1.0, PixelDist::L1));
    const auto path = std::filesystem::temp_directory_path() / "graphla_lap.mtx";
    save_matrix_market(lap.matrix, path);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "%%MatrixMarket matrix coordinate real general");
    Index rows, cols, nnz;
    in >> rows >> cols >> nnz;
    CHECK(rows == 2);
    CHECK(nnz == 4);
  }

  TEST_CASE("dimension mismatch on apply") {
    Mat guide(3, 3);
    guide.setRandom();
    const GraphLaplacian lap = build_laplacian(guide, spec_with(1, 1.0, PixelDist::L1));
    CHECK_THROWS_AS(apply_laplacian(lap, Vec::Ones(5)), DimensionMismatch);
  }
}
