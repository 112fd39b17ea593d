#include "graphla/benchmark.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

#include "graphla/errors.hpp"
#include "graphla/grid.hpp"
#include "graphla/image.hpp"
#include "graphla/metrics.hpp"
#include "graphla/solvers.hpp"
#include "graphla/util.hpp"

namespace graphla {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string shortest(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

std::string level_label(const std::optional<double>& db) {
  if (!db) return "noiseless";
  std::ostringstream os;
  os << "psnr" << *db;
  return os.str();
}

ImpedanceGrid make_initial_guess(const Initializer& init, const ForwardOperator& K,
                                 const SeismicGrid& y) {
  return std::visit(
      [&](const auto& i) -> ImpedanceGrid {
        using T = std::decay_t<decltype(i)>;
        if constexpr (std::is_same_v<T, SsiInit>) {
          return sparse_spike_invert(K, y, i.alpha);
        } else if constexpr (std::is_same_v<T, SbInit>) {
          return split_bregman_2d(K.trace_matrix, y, i.alpha, i.beta, i.iters).x;
        } else {
          return load_initializer(i.path, K.n_t(), y.cols());
        }
      },
      init);
}

void write_metrics_csv(const fs::path& path, const BenchmarkCell& cell) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoFailure("cannot open for writing: " + path.string());
  out << "iter,dmse,ssim,alpha,residual\n";
  for (size_t n = 0; n < cell.per_iteration.size(); ++n) {
    const auto& m = cell.per_iteration[n];
    out << n << ',' << shortest(m.dmse) << ',' << shortest(m.ssim) << ',';
    if (n == 0)
      out << "0,0";
    else
      out << shortest(cell.reports[n - 1].alpha) << ','
          << shortest(cell.reports[n - 1].residual_norm);
    out << '\n';
  }
  if (!out) throw IoFailure("write failed: " + path.string());
}

void write_manifest(const fs::path& path, const BenchmarkConfig& cfg,
                    const BenchmarkCell& cell, const ImpedanceGrid& truth,
                    const SeismicGrid& y) {
  json j;
  j["cell"] = cell.name;
  j["initializer"] = initializer_name(cfg.init);
  j["phantom"] = {{"n_t", cfg.phantom.n_t},     {"n_x", cfg.phantom.n_x},
                  {"n_layers", cfg.phantom.n_layers}, {"dip", cfg.phantom.dip},
                  {"seed", cfg.phantom.seed}};
  j["wavelet"] = {{"peak_freq", cfg.wavelet.peak_freq},
                  {"dt", cfg.wavelet.dt},
                  {"half_width", cfg.wavelet.half_width}};
  j["undersample"] = cfg.undersample;
  if (cell.psnr_db) j["target_psnr"] = *cell.psnr_db;
  j["delta"] = cell.delta;
  j["iterations"] = cfg.iteration.iterations;
  j["graph"] = {{"radius", cfg.iteration.graph.radius},
                {"sigma", cfg.iteration.graph.sigma},
                {"dist", cfg.iteration.graph.dist == PixelDist::L1 ? "l1" : "linf"}};
  j["inputs"] = {{"truth_digest", digest(truth)}, {"seismic_digest", digest(y)}};
  json per_iter = json::array();
  for (size_t n = 0; n < cell.per_iteration.size(); ++n) {
    json row = {{"iter", n},
                {"dmse", cell.per_iteration[n].dmse},
                {"ssim", cell.per_iteration[n].ssim}};
    if (n > 0) {
      row["alpha"] = cell.reports[n - 1].alpha;
      row["residual"] = cell.reports[n - 1].residual_norm;
      row["flags"] = cell.reports[n - 1].flags;
    }
    per_iter.push_back(row);
  }
  j["metrics"] = per_iter;
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoFailure("cannot open for writing: " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace

std::string initializer_name(const Initializer& init) {
  return std::visit(
      [](const auto& i) -> std::string {
        using T = std::decay_t<decltype(i)>;
        if constexpr (std::is_same_v<T, SsiInit>)
          return "ssi";
        else if constexpr (std::is_same_v<T, SbInit>)
          return "sb";
        else
          return "external";
      },
      init);
}

BenchmarkReport run_benchmark(const BenchmarkConfig& cfg) {
  const Wavelet w = ricker(cfg.wavelet.peak_freq, cfg.wavelet.dt, cfg.wavelet.half_width);
  const ForwardOperator K = build_forward(w, cfg.phantom.n_t, cfg.undersample);

  BenchmarkReport report;
  report.truth = normalize(make_phantom(cfg.phantom)).values;
  const SeismicGrid y_clean = K.apply(report.truth);

  std::vector<std::optional<double>> levels;
  levels.push_back(std::nullopt);
  for (double db : cfg.noise_levels_db) levels.push_back(db);

  const std::string init_name = initializer_name(cfg.init);
  for (size_t li = 0; li < levels.size(); ++li) {
    const auto& level = levels[li];
    SeismicGrid y = y_clean;
    double delta = 0.0;
    if (level) {
      auto noisy = add_noise_to_psnr(y_clean, *level, cfg.noise_seed + li);
      y = std::move(noisy.first);
      delta = noisy.second;
    }

    BenchmarkCell cell;
    cell.name = init_name + "_" + level_label(level);
    cell.psnr_db = level;
    cell.delta = delta;

    const ImpedanceGrid x0 = make_initial_guess(cfg.init, K, y);
    IterationConfig iter_cfg = cfg.iteration;
    IterationHistory history = run(K, y, x0, delta, iter_cfg, &report.truth);

    cell.per_iteration = history.metrics_per_iter;
    cell.init_metrics = history.metrics_per_iter.front();
    cell.final_metrics = history.metrics_per_iter.back();
    cell.reports = history.reports;

    if (!cfg.out_dir.empty()) {
      const fs::path dir = cfg.out_dir / cell.name;
      fs::create_directories(dir);
      save_grid(y, dir / "y.grd");
      save_grid(x0, dir / "x0.grd");
      save_grid(history.final_iterate(),
                dir / ("x" + std::to_string(cfg.iteration.iterations) + ".grd"));
      write_metrics_csv(dir / "metrics.csv", cell);
      write_manifest(dir / "manifest.txt", cfg, cell, report.truth, y);
      if (cfg.write_plots) {
        fs::create_directories(dir / "plots");
        write_ppm(report.truth, dir / "plots" / "truth.ppm");
        write_ppm(x0, dir / "plots" / "x0.ppm");
        write_ppm(history.final_iterate(),
                  dir / "plots" /
                      ("x" + std::to_string(cfg.iteration.iterations) + ".ppm"));
      }
    }
    report.cells.push_back(std::move(cell));
  }

  if (!cfg.out_dir.empty()) {
    std::ofstream out(cfg.out_dir / "summary.csv", std::ios::trunc);
    if (!out) throw IoFailure("cannot write benchmark summary");
    out << "cell,psnr,init_dmse,init_ssim,final_dmse,final_ssim\n";
    for (const auto& cell : report.cells) {
      out << cell.name << ',' << (cell.psnr_db ? shortest(*cell.psnr_db) : "inf") << ','
          << shortest(cell.init_metrics.dmse) << ',' << shortest(cell.init_metrics.ssim)
          << ',' << shortest(cell.final_metrics.dmse) << ','
          << shortest(cell.final_metrics.ssim) << '\n';
    }
  }
  return report;
}

}  // namespace graphla
