#include <cmath>
#include <iostream>

#include "graphla/errors.hpp"
#include "graphla/forward.hpp"
#include "graphla/solvers.hpp"

namespace graphla {

namespace {

Mat shrink(const Mat& v, double t) {
  return v.array().sign() * (v.array().abs() - t).max(0.0);
}

Mat diff_rows(const Mat& x) {  // Dt x, (n_t-1) x n_x
  return x.topRows(x.rows() - 1) - x.bottomRows(x.rows() - 1);
}

Mat diff_rows_adjoint(const Mat& d, Index n_t) {  // Dt^T d
  Mat out = Mat::Zero(n_t, d.cols());
  out.topRows(n_t - 1) += d;
  out.bottomRows(n_t - 1) -= d;
  return out;
}

Mat diff_cols(const Mat& x) {  // x Ds^T, n_t x (n_x-1)
  return x.leftCols(x.cols() - 1) - x.rightCols(x.cols() - 1);
}

Mat diff_cols_adjoint(const Mat& d, Index n_x) {  // d Ds
  Mat out = Mat::Zero(d.rows(), n_x);
  out.leftCols(n_x - 1) += d;
  out.rightCols(n_x - 1) -= d;
  return out;
}

}  // namespace

SplitBregmanResult split_bregman_2d(const SpMat& k_trace, const SeismicGrid& y,
                                    double alpha, double beta, int iters) {
  if (alpha < 0.0 || beta < 0.0)
    throw OutOfBounds("split_bregman_2d: alpha, beta must be >= 0");
  if (iters < 1) throw OutOfBounds("split_bregman_2d: iters >= 1");
  if (y.rows() != k_trace.rows())
    throw DimensionMismatch("split_bregman_2d: seismic rows != operator rows");
  const Index n_t = k_trace.cols();
  const Index n_x = y.cols();
  const bool use_t = alpha > 0.0 && n_t >= 2;
  const bool use_s = beta > 0.0 && n_x >= 2;
  const double lambda_t = use_t ? 2.0 * alpha : 0.0;
  const double lambda_s = use_s ? 2.0 * beta : 0.0;

  const Mat kty = k_trace.transpose() * y;

  auto quad_op = [&](const Mat& x) {
    Mat out = 2.0 * (k_trace.transpose() * (k_trace * x));
    if (use_t) out += lambda_t * diff_rows_adjoint(diff_rows(x), n_t);
    if (use_s) out += lambda_s * diff_cols_adjoint(diff_cols(x), n_x);
    return out;
  };

  // CG on the (possibly singular but consistent) normal equations; the
  // right-hand sides stay orthogonal to the common kernel.
  auto cg_solve = [&](const Mat& rhs, Mat x) {
    Mat r = rhs - quad_op(x);
    Mat p = r;
    double rs = r.squaredNorm();
    const double tol2 = 1e-24 * std::max(1.0, rhs.squaredNorm());
    for (int it = 0; it < 400 && rs > tol2; ++it) {
      const Mat ap = quad_op(p);
      const double pap = (p.array() * ap.array()).sum();
      if (pap <= 0.0) break;
      const double step = rs / pap;
      x += step * p;
      r -= step * ap;
      const double rs_new = r.squaredNorm();
      p = r + (rs_new / rs) * p;
      rs = rs_new;
    }
    return x;
  };

  Mat x = Mat::Zero(n_t, n_x);
  Mat dt = use_t ? Mat::Zero(n_t - 1, n_x) : Mat();
  Mat bt = dt;
  Mat ds = use_s ? Mat::Zero(n_t, n_x - 1) : Mat();
  Mat bs = ds;

  auto objective = [&](const Mat& v) {
    double obj = (y - k_trace * v).squaredNorm();
    if (n_t >= 2) obj += alpha * diff_rows(v).cwiseAbs().sum();
    if (n_x >= 2) obj += beta * diff_cols(v).cwiseAbs().sum();
    return obj;
  };

  SplitBregmanResult result;
  result.objective.reserve(static_cast<size_t>(iters));
  for (int it = 0; it < iters; ++it) {
    Mat rhs = 2.0 * kty;
    if (use_t) rhs += lambda_t * diff_rows_adjoint(dt - bt, n_t);
    if (use_s) rhs += lambda_s * diff_cols_adjoint(ds - bs, n_x);
    x = cg_solve(rhs, std::move(x));
    if (!x.allFinite()) throw NonFinite("split_bregman_2d: iterate diverged");

    if (use_t) {
      const Mat gt = diff_rows(x);
      dt = shrink(gt + bt, alpha / lambda_t);
      bt += gt - dt;
    }
    if (use_s) {
      const Mat gs = diff_cols(x);
      ds = shrink(gs + bs, beta / lambda_s);
      bs += gs - ds;
    }

    const double obj = objective(x);
    result.objective.push_back(obj);
    const size_t k = result.objective.size();
    if (k % 5 == 0 && k >= 10) {
      if (result.objective[k - 1] > result.objective[k - 6] * (1.0 + 1e-9)) {
        if (!result.monotonicity_warning)
          std::cerr << "split_bregman_2d: objective increased between iterations "
                    << k - 6 << " and " << k - 1 << "\n";
        result.monotonicity_warning = true;
      }
    }
  }

  result.x = std::move(x);
  if (use_t) result.dual_time = (lambda_t / alpha) * bt;
  if (use_s) result.dual_space = (lambda_s / beta) * bs;
  return result;
}

ImpedanceGrid solve_residual_formulation(const SpMat& k_trace, const SeismicGrid& y,
                                         const ImpedanceGrid& x_cont, double alpha,
                                         double beta, int iters) {
  if (x_cont.rows() != k_trace.cols() || x_cont.cols() != y.cols())
    throw DimensionMismatch("solve_residual_formulation: x_cont shape mismatch");
  const SeismicGrid residual_data = y - k_trace * x_cont;
  SplitBregmanResult jump = split_bregman_2d(k_trace, residual_data, alpha, beta, iters);
  return x_cont + jump.x;
}

}  // namespace graphla
