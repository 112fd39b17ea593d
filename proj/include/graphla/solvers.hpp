#pragma once

#include <optional>
#include <string>
#include <vector>

#include "graphla/forward.hpp"
#include "graphla/linear_operator.hpp"
#include "graphla/types.hpp"

namespace graphla {

// min_x 1/2 ||K x - y||^2 + alpha ||L x||_1 with alpha picked so the data
// residual matches the noise bound delta. A nonempty x0 warm-starts the
// solver: it seeds the subspace and anchors the first majorization.
struct L2L1Problem {
  LinOp K;
  Vec y;
  LinOp L;
  double delta = 0.0;
  Vec x0;
};

struct MmgksConfig {
  Index subspace_dim = 50;   // cap on the generalized Krylov basis
  double eps_rel = 1e-4;     // l1 smoothing, relative to max|y|
  int max_sweeps = 30;
  double tau = 1.01;         // discrepancy slack, residual target in [delta, tau*delta]
  double bracket_lo = 1e-8;  // alpha bracket, scaled by ||K^T y||_inf
  double bracket_hi = 1e+4;
  std::optional<double> fixed_alpha;  // bypass the discrepancy search
  double x_tol = 1e-10;      // early stop on relative iterate change
};

struct SolveReport {
  Vec x;
  double alpha = 0.0;
  double residual_norm = 0.0;
  int sweeps_used = 0;
  Index subspace_dim_final = 0;
  std::vector<std::string> flags;  // "bracket_exhausted", "noiseless_alpha", ...
  // Per-sweep objective values at that sweep's alpha; the smoothed trace
  // carries the majorization guarantee.
  std::vector<double> objective_l1;
  std::vector<double> objective_smoothed;

  bool flagged(const std::string& name) const;
  std::string to_json() const;
};

// Majorization-minimization in a generalized Krylov subspace: each sweep
// reweights the l1 term by ((Lx)^2 + eps^2)^(-1/2), solves the resulting
// weighted least-squares problem projected on the current basis (searching
// alpha by bisection on log alpha unless fixed), then grows the basis with
// the normalized residual of the normal equations.
SolveReport mmgks_solve(const L2L1Problem& problem, const MmgksConfig& cfg = {});

// Trace-wise sparse spike inversion: solves the l1-penalized reflectivity
// problem min_r ||A r - y||^2 + alpha ||r||_1 with A the wavelet +
// decimation part of the forward model, then integrates r back to an
// impedance trace starting from `baseline`.
Vec sparse_spike_trace(const ForwardOperator& op, const Vec& y_trace,
                       double alpha, double baseline = 0.0);

// Batch driver over all traces of a seismic grid (parallel by trace).
ImpedanceGrid sparse_spike_invert(const ForwardOperator& op, const SeismicGrid& y,
                                  double alpha, double baseline = 0.0);

struct SplitBregmanResult {
  ImpedanceGrid x;
  std::vector<double> objective;   // recorded every outer iteration
  bool monotonicity_warning = false;
  // Scaled Bregman duals at exit; candidate subgradient certificates for
  // the two l1 terms (lambda/alpha * b).
  Mat dual_time;
  Mat dual_space;
};

// Anisotropic-TV inversion min ||y - Kx||_F^2 + alpha ||Dt x||_1,1 +
// beta ||x Ds^T||_1,1 by split Bregman with CG on the quadratic step.
// K applies trace-wise (pass an identity for denoising).
SplitBregmanResult split_bregman_2d(const SpMat& k_trace, const SeismicGrid& y,
                                    double alpha, double beta, int iters);

// Background-impedance variant: runs split Bregman on the residual data
// y - K x_cont and returns x_cont + x_jump.
ImpedanceGrid solve_residual_formulation(const SpMat& k_trace, const SeismicGrid& y,
                                         const ImpedanceGrid& x_cont, double alpha,
                                         double beta, int iters);

}  // namespace graphla
