#pragma once

#include <cstdint>
#include <utility>

#include "graphla/types.hpp"

namespace graphla {

struct SsimConfig {
  Index window = 11;  // odd
  double c1 = 1e-4;
  double c2 = 3e-4;
};

// Mean squared error of the time-direction differences, normalized by the
// number of nonzero entries of the true differential (scales with layer
// count instead of grid size).
double d_mse(const ImpedanceGrid& rec, const ImpedanceGrid& truth);

// Structural similarity on globally normalized grids: plain sample
// statistics over every fully interior window, averaged.
double ssim(const ImpedanceGrid& a, const ImpedanceGrid& b, const SsimConfig& cfg = {});

// 10 log10(peak^2 / mse) with peak = max|clean|.
double psnr(const Mat& clean, const Mat& noisy);

// White Gaussian noise scaled to hit the target PSNR; returns the noisy
// grid and the exact l2 norm of the added noise. Deterministic per seed.
std::pair<SeismicGrid, double> add_noise_to_psnr(const SeismicGrid& clean,
                                                 double target_psnr,
                                                 std::uint64_t seed);

}  // namespace graphla
