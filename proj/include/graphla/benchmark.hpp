#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "graphla/iterate.hpp"
#include "graphla/phantom.hpp"
#include "graphla/types.hpp"

namespace graphla {

struct SsiInit {
  double alpha = 0.6;
};

struct SbInit {
  double alpha = 2.0;
  double beta = 2.0;
  int iters = 200;
};

struct ExternalInit {
  std::filesystem::path path;
};

using Initializer = std::variant<SsiInit, SbInit, ExternalInit>;

struct WaveletConfig {
  double peak_freq = 30.0;  // Hz
  double dt = 0.004;        // s
  Index half_width = 12;
};

struct BenchmarkConfig {
  PhantomSpec phantom;
  WaveletConfig wavelet;
  Index undersample = 4;
  std::vector<double> noise_levels_db = {39.0, 33.0, 30.0, 27.0};  // noiseless runs too
  Initializer init = SbInit{};
  IterationConfig iteration;
  std::filesystem::path out_dir;  // empty = no files, report only
  std::uint64_t noise_seed = 99;
  bool write_plots = true;
};

struct BenchmarkCell {
  std::string name;                 // e.g. "sb_psnr33"
  std::optional<double> psnr_db;    // empty for the noiseless cell
  double delta = 0.0;
  IterationMetrics init_metrics;
  IterationMetrics final_metrics;
  std::vector<IterationMetrics> per_iteration;  // length N+1
  std::vector<SolveReport> reports;
};

struct BenchmarkReport {
  std::vector<BenchmarkCell> cells;  // noiseless first, then by level order
  ImpedanceGrid truth;
};

// Synthesizes data from the phantom at every noise level (noiseless
// included), runs the chosen initializer and the iterated reconstruction,
// and records metrics before and after. When out_dir is set, each cell
// writes x0.grd, xN.grd, metrics.csv, manifest.txt and plots/.
BenchmarkReport run_benchmark(const BenchmarkConfig& cfg);

std::string initializer_name(const Initializer& init);

}  // namespace graphla
