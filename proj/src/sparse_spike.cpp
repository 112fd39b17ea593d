#include <cmath>
#include <mutex>

#include "graphla/errors.hpp"
#include "graphla/parallel.hpp"
#include "graphla/solvers.hpp"

namespace graphla {

namespace {

double largest_singular_value(const SpMat& a) {
  // Power iteration on A^T A with a fixed start vector.
  Vec v = Vec::Ones(a.cols());
  v /= v.norm();
  double s = 0.0;
  for (int it = 0; it < 200; ++it) {
    Vec w = a.transpose() * (a * v);
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    v = w / nw;
    const double s_new = std::sqrt(nw);
    if (std::abs(s_new - s) <= 1e-12 * std::max(1.0, s_new) && it > 4) return s_new;
    s = s_new;
  }
  return s;
}

inline double soft_threshold(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

// FISTA on f(r) = ||A r - y||^2 + alpha ||r||_1.
Vec fista_lasso(const SpMat& a, const Vec& y, double alpha) {
  const Index n = a.cols();
  Vec r = Vec::Zero(n);
  if (y.norm() == 0.0) return r;
  const double smax = largest_singular_value(a);
  if (smax == 0.0) return r;
  const double lip = 2.0 * smax * smax;
  const double step = 1.0 / lip;

  Vec momentum = r;
  double t_acc = 1.0;
  double obj_prev = y.squaredNorm();
  const int max_iter = 50000;
  int flat_streak = 0;
  for (int it = 0; it < max_iter; ++it) {
    const Vec grad = 2.0 * (a.transpose() * (a * momentum - y));
    Vec r_next(n);
    for (Index i = 0; i < n; ++i)
      r_next[i] = soft_threshold(momentum[i] - step * grad[i], alpha * step);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_acc * t_acc));
    momentum = r_next + ((t_acc - 1.0) / t_next) * (r_next - r);
    r = r_next;
    t_acc = t_next;

    const double obj = (a * r - y).squaredNorm() + alpha * r.lpNorm<1>();
    if (!std::isfinite(obj)) throw NonFinite("sparse spike: objective diverged");
    if (std::abs(obj_prev - obj) <= 1e-12 * std::max(1.0, obj)) {
      if (++flat_streak >= 8) return r;
    } else {
      flat_streak = 0;
    }
    obj_prev = obj;
  }
  throw SolverStalled("sparse spike: no convergence within iteration budget");
}

}  // namespace

Vec sparse_spike_trace(const ForwardOperator& op, const Vec& y_trace, double alpha,
                       double baseline) {
  if (alpha <= 0.0) throw OutOfBounds("sparse_spike_trace: alpha must be > 0");
  if (y_trace.size() != op.m_t())
    throw DimensionMismatch("sparse_spike_trace: trace length != operator rows");
  const Vec r = fista_lasso(op.refl_matrix, y_trace, alpha);
  // r_i = x_i - x_{i+1}: integrate downward from the baseline sample.
  Vec x(op.n_t());
  x[0] = baseline;
  for (Index i = 0; i + 1 < x.size(); ++i) x[i + 1] = x[i] - r[i];
  return x;
}

ImpedanceGrid sparse_spike_invert(const ForwardOperator& op, const SeismicGrid& y,
                                  double alpha, double baseline) {
  if (y.rows() != op.m_t())
    throw DimensionMismatch("sparse_spike_invert: seismic rows != operator rows");
  ImpedanceGrid x(op.n_t(), y.cols());
  std::exception_ptr failure;
  std::mutex failure_lock;
  parallel_for(y.cols(), [&](Index begin, Index end) {
    try {
      for (Index j = begin; j < end; ++j)
        x.col(j) = sparse_spike_trace(op, y.col(j), alpha, baseline);
    } catch (...) {
      std::lock_guard<std::mutex> hold(failure_lock);
      if (!failure) failure = std::current_exception();
    }
  });
  if (failure) std::rethrow_exception(failure);
  return x;
}

}  // namespace graphla
