#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "graphla/forward.hpp"
#include "graphla/graph_laplacian.hpp"
#include "graphla/solvers.hpp"
#include "graphla/types.hpp"

namespace graphla {

struct IterationConfig {
  int iterations = 10;
  GraphSpec graph;       // R = 2, sigma = 0.25 by default
  MmgksConfig solver;    // d = 50 by default
  bool record_history = false;
};

struct IterationMetrics {
  double dmse = 0.0;
  double ssim = 0.0;
};

struct IterationHistory {
  // x0 plus, when record_history is set, every x_n; the final iterate is
  // always last.
  std::vector<ImpedanceGrid> iterates;
  std::vector<SolveReport> reports;                  // one per outer step
  std::vector<IterationMetrics> metrics_per_iter;    // length N+1 when truth given
  double delta_used = 0.0;
  bool delta_estimated = false;

  const ImpedanceGrid& final_iterate() const { return iterates.back(); }
};

// The outer loop: at step n build the graph Laplacian from x_{n-1} and
// solve the data-fit problem with ||Lap x||_1 as penalty. Deterministic
// for identical inputs and config.
IterationHistory run(const ForwardOperator& K, const SeismicGrid& y,
                     const ImpedanceGrid& x0, std::optional<double> delta,
                     const IterationConfig& cfg,
                     const ImpedanceGrid* truth = nullptr);

// External initializer: grid used verbatim as x0 after a shape check
// against the expected dimensions.
ImpedanceGrid load_initializer(const std::filesystem::path& path, Index n_t, Index n_x);

}  // namespace graphla
