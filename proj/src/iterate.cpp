#include "graphla/iterate.hpp"

#include <string>

#include "graphla/errors.hpp"
#include "graphla/grid.hpp"
#include "graphla/metrics.hpp"

namespace graphla {

namespace {

IterationMetrics score(const ImpedanceGrid& rec, const ImpedanceGrid& truth) {
  return {d_mse(rec, truth), ssim(rec, truth)};
}

}  // namespace

IterationHistory run(const ForwardOperator& K, const SeismicGrid& y,
                     const ImpedanceGrid& x0, std::optional<double> delta,
                     const IterationConfig& cfg, const ImpedanceGrid* truth) {
  if (cfg.iterations < 1) throw OutOfBounds("run: iterations >= 1 required");
  if (x0.rows() != K.n_t()) throw DimensionMismatch("run: x0 rows != operator n_t");
  if (y.rows() != K.m_t()) throw DimensionMismatch("run: y rows != operator m_t");
  if (y.cols() != x0.cols()) throw DimensionMismatch("run: trace counts differ");
  if (!all_finite(x0)) throw NonFinite("run: x0 has NaN/Inf");
  if (truth && (truth->rows() != x0.rows() || truth->cols() != x0.cols()))
    throw DimensionMismatch("run: truth shape mismatch");

  const Index n_t = x0.rows();
  const Index n_x = x0.cols();

  IterationHistory history;
  history.delta_estimated = !delta.has_value();
  history.delta_used =
      delta.value_or(0.9 * (flatten(y) - K.flattened(n_x).apply(flatten(x0))).norm());

  history.iterates.push_back(x0);
  if (truth) history.metrics_per_iter.push_back(score(x0, *truth));

  const LinOp k_op = K.flattened(n_x);
  const Vec y_vec = flatten(y);
  ImpedanceGrid current = x0;

  for (int n = 1; n <= cfg.iterations; ++n) {
    try {
      const GraphLaplacian lap = build_laplacian(current, cfg.graph);
      L2L1Problem problem{k_op, y_vec, LinOp(lap.matrix), history.delta_used,
                          flatten(current)};
      SolveReport report = mmgks_solve(problem, cfg.solver);
      current = unflatten(report.x, n_t, n_x);
      history.reports.push_back(std::move(report));
    } catch (const Error& e) {
      throw Error("iteration " + std::to_string(n) + ": " + e.what());
    }
    if (truth) history.metrics_per_iter.push_back(score(current, *truth));
    if (cfg.record_history || n == cfg.iterations) history.iterates.push_back(current);
  }
  return history;
}

ImpedanceGrid load_initializer(const std::filesystem::path& path, Index n_t, Index n_x) {
  ImpedanceGrid grid = load_grid(path);
  if (grid.rows() != n_t || grid.cols() != n_x)
    throw DimensionMismatch("initializer " + path.string() + " is " +
                            std::to_string(grid.rows()) + "x" +
                            std::to_string(grid.cols()) + ", expected " +
                            std::to_string(n_t) + "x" + std::to_string(n_x));
  return grid;
}

}  // namespace graphla
