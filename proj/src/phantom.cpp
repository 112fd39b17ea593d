#include "graphla/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "graphla/errors.hpp"
#include "graphla/util.hpp"

namespace graphla {

ImpedanceGrid make_phantom(const PhantomSpec& spec) {
  if (spec.n_t < 2 || spec.n_x < 1 || spec.n_layers < 2)
    throw OutOfBounds("make_phantom: need n_t >= 2, n_x >= 1, n_layers >= 2");
  if (spec.impedance_lo >= spec.impedance_hi)
    throw OutOfBounds("make_phantom: impedance range is empty");

  NormalSampler rng(spec.seed);
  const Index n_b = spec.n_layers - 1;  // boundary count

  // Evenly spaced anchor depths, jittered, with per-boundary dip. Slopes
  // are capped so neighbouring boundaries cannot cross.
  const double band = static_cast<double>(spec.n_t) / static_cast<double>(spec.n_layers);
  std::vector<double> anchor(static_cast<size_t>(n_b));
  std::vector<double> slope(static_cast<size_t>(n_b));
  for (Index k = 0; k < n_b; ++k) {
    const double jitter = (rng.uniform01() - 0.5) * 0.4 * band;
    anchor[static_cast<size_t>(k)] = band * static_cast<double>(k + 1) + jitter;
    slope[static_cast<size_t>(k)] = (2.0 * rng.uniform01() - 1.0) * spec.dip;
  }
  const double max_shift = spec.dip * static_cast<double>(spec.n_x);
  for (Index k = 0; k + 1 < n_b; ++k) {
    // keep at least one sample of separation across the full width
    const double gap = anchor[static_cast<size_t>(k + 1)] - anchor[static_cast<size_t>(k)];
    if (gap < 2.0 * max_shift + 1.0) {
      const double shrink = gap > 1.0 ? (gap - 1.0) / (2.0 * std::max(max_shift, 1e-9)) : 0.0;
      slope[static_cast<size_t>(k)] *= std::min(1.0, shrink);
      slope[static_cast<size_t>(k + 1)] *= std::min(1.0, shrink);
    }
  }

  // Layer impedances: alternate around the range midline with random
  // magnitudes so consecutive layers always contrast.
  std::vector<double> level(static_cast<size_t>(spec.n_layers));
  const double mid = 0.5 * (spec.impedance_lo + spec.impedance_hi);
  const double half = 0.5 * (spec.impedance_hi - spec.impedance_lo);
  for (Index k = 0; k < spec.n_layers; ++k) {
    const double magnitude = (0.35 + 0.65 * rng.uniform01()) * half;
    const double side = (k % 2 == 0) ? 1.0 : -1.0;
    level[static_cast<size_t>(k)] = mid + side * magnitude;
  }

  ImpedanceGrid grid(spec.n_t, spec.n_x);
  for (Index j = 0; j < spec.n_x; ++j) {
    std::vector<Index> cut(static_cast<size_t>(n_b));
    for (Index k = 0; k < n_b; ++k) {
      const double depth =
          anchor[static_cast<size_t>(k)] + slope[static_cast<size_t>(k)] * static_cast<double>(j);
      cut[static_cast<size_t>(k)] =
          std::clamp<Index>(static_cast<Index>(std::lround(depth)), 1, spec.n_t - 1);
    }
    std::sort(cut.begin(), cut.end());
    Index layer = 0;
    for (Index i = 0; i < spec.n_t; ++i) {
      while (layer < n_b && i >= cut[static_cast<size_t>(layer)]) ++layer;
      grid(i, j) = level[static_cast<size_t>(layer)];
    }
  }

  if (spec.smooth_background) {
    // Gentle trend, strictly monotone in time so every time difference
    // becomes nonzero without drowning the jumps.
    const double amp = 0.05 * half;
    for (Index j = 0; j < spec.n_x; ++j) {
      const double phase = 0.5 * M_PI * static_cast<double>(j) / std::max<Index>(1, spec.n_x);
      for (Index i = 0; i < spec.n_t; ++i) {
        const double s = static_cast<double>(i) / static_cast<double>(spec.n_t - 1);
        grid(i, j) += amp * (s + 0.1 * std::sin(2.0 * M_PI * s + phase));
      }
    }
  }
  return grid;
}

}  // namespace graphla
