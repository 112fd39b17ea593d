#pragma once

#include <filesystem>
#include <optional>

#include "graphla/linear_operator.hpp"
#include "graphla/types.hpp"

namespace graphla {

struct Wavelet {
  Vec samples;            // odd length, centered on the middle sample
  double dt = 0.004;      // seconds per sample
  std::optional<double> peak_freq;  // Hz, when known

  Index half_width() const { return (samples.size() - 1) / 2; }
};

// Ricker wavelet (1 - 2 pi^2 f^2 t^2) exp(-pi^2 f^2 t^2) sampled at dt on
// [-half_width, half_width]; the center sample is exactly 1.
Wavelet ricker(double peak_freq, double dt, Index half_width);

// First-order time difference: (n_t-1) x n_t rows of [..., 1, -1, ...].
SpMat time_difference_operator(Index n_t);

// Linear convolutional forward model y = decimate(conv(wavelet, diff(x)))
// applied trace by trace. The convolution keeps the 'same' (n_t-1)-sample
// length with zero boundary; decimation keeps rows 0, u, 2u, ... of that
// intermediate.
struct ForwardOperator {
  SpMat trace_matrix;  // m_t x n_t, acts on one impedance trace
  SpMat refl_matrix;   // m_t x (n_t-1), same without the leading difference
  Index undersample = 1;
  Wavelet wavelet;

  Index n_t() const { return trace_matrix.cols(); }
  Index m_t() const { return trace_matrix.rows(); }

  SeismicGrid apply(const ImpedanceGrid& x) const;
  ImpedanceGrid apply_adjoint(const SeismicGrid& y) const;

  // Flattened block-diagonal view for solvers (column-major stacking).
  LinOp flattened(Index n_traces) const {
    return LinOp::tracewise(trace_matrix, n_traces);
  }
};

ForwardOperator build_forward(const Wavelet& wavelet, Index n_t, Index undersample);

// Zero-phase wavelet estimate from data: average the per-trace DFT
// magnitudes, inverse-transform the averaged spectrum, keep the real part,
// center it circularly, truncate to `length`, and scale the largest
// magnitude to norm_peak.
Wavelet estimate_wavelet(const SeismicGrid& seismic, Index length,
                         double norm_peak, double dt);

// Dense least-squares fit of a forward matrix from (impedance, seismic)
// pairs with a small ridge term; an alternative to the convolutional
// construction when example pairs are available.
Mat fit_operator(const Mat& impedance, const Mat& seismic, double ridge = 1e-6);

// One sample per line, preceded by a "# dt=<seconds>" comment.
void save_wavelet(const Wavelet& w, const std::filesystem::path& path);
Wavelet load_wavelet(const std::filesystem::path& path);

}  // namespace graphla
