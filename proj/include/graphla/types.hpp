#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <optional>

namespace graphla {

using Index = Eigen::Index;

template <class Scalar>
using MatX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using VecX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Mat = MatX<double>;
using Vec = VecX<double>;
using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Triplet = Eigen::Triplet<double>;

// Grids are plain dense matrices: time samples along rows, traces along
// columns. Impedance grids are n_t x n_x, seismic grids m_t x n_x.
using ImpedanceGrid = Mat;
using SeismicGrid = Mat;

struct NoiseModel {
  double delta = 0.0;                 // l2 bound on the noise norm
  std::optional<double> target_psnr;  // dB, when noise was synthesized
};

template <class Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

// Column-major flattening shared by the graph Laplacian and the trace-wise
// forward operator: node (i, j) of an n_t x n_x grid maps to i + j*n_t.
inline Vec flatten(const Mat& grid) {
  return Eigen::Map<const Vec>(grid.data(), grid.size());
}

inline Mat unflatten(const Vec& v, Index rows, Index cols) {
  return Eigen::Map<const Mat>(v.data(), rows, cols);
}

}  // namespace graphla
