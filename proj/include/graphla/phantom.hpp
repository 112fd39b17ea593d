#pragma once

#include <cstdint>

#include "graphla/types.hpp"

namespace graphla {

struct PhantomSpec {
  Index n_t = 128;
  Index n_x = 64;
  Index n_layers = 10;
  double dip = 0.15;  // max boundary slope, samples per trace
  double impedance_lo = 4000.0;
  double impedance_hi = 12000.0;
  std::uint64_t seed = 1;
  bool smooth_background = false;  // add a continuous trend under the layers
};

// Layered impedance grid with gently dipping boundaries; piecewise
// constant per layer unless smooth_background adds a trend. Deterministic
// per seed.
ImpedanceGrid make_phantom(const PhantomSpec& spec);

}  // namespace graphla
