// Command-line front end: invert, benchmark, make-phantom, estimate-wavelet,
// metrics. Exit codes: 0 success, 1 runtime/module error, 2 argument error.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "graphla/benchmark.hpp"
#include "graphla/errors.hpp"
#include "graphla/grid.hpp"
#include "graphla/image.hpp"
#include "graphla/iterate.hpp"
#include "graphla/metrics.hpp"
#include "graphla/parallel.hpp"
#include "graphla/solvers.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace graphla;

namespace {

struct InitChoice {
  std::string kind = "sb";  // ssi | sb | external
  fs::path external_path;
};

InitChoice parse_init(const std::string& text) {
  InitChoice c;
  if (text == "ssi" || text == "sb") {
    c.kind = text;
  } else if (text.rfind("external:", 0) == 0) {
    c.kind = "external";
    c.external_path = text.substr(9);
    if (c.external_path.empty())
      throw CLI::ValidationError("--init", "external: needs a path");
  } else {
    throw CLI::ValidationError("--init", "expected ssi, sb, or external:PATH");
  }
  return c;
}

Wavelet parse_wavelet(const std::string& text, double dt, Index half_width) {
  if (text.rfind("ricker:", 0) == 0) {
    const double freq = std::stod(text.substr(7));
    return ricker(freq, dt, half_width);
  }
  return load_wavelet(text);
}

PixelDist parse_dist(const std::string& text) {
  if (text == "l1") return PixelDist::L1;
  if (text == "linf") return PixelDist::Linf;
  throw CLI::ValidationError("--dist", "expected l1 or linf");
}

// Smallest n_t consistent with the observed row count and undersampling.
Index infer_nt(Index m_t, Index u) { return (m_t - 1) * u + 2; }

struct CommonOpts {
  int threads = 0;
  void apply() const {
    if (threads > 0) {
      set_max_threads(threads);
    } else if (const char* env = std::getenv("GRAPHLA_THREADS")) {
      const int n = std::atoi(env);
      if (n > 0) set_max_threads(n);
    }
  }
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--threads", opts.threads, "worker threads (default: cores)");
  cmd->set_config("--config", "", "flat key = value config file");
  cmd->allow_config_extras(false);
}

struct InvertOpts {
  CommonOpts common;
  std::string seismic_path;
  std::string init_text = "sb";
  std::string wavelet_text = "ricker:30";
  std::string dist_text = "linf";
  std::string out_dir = ".";
  std::string truth_path;
  double dt = 0.004, radius = 2.0, sigma = 0.25;
  double alpha = -1.0, beta = -1.0, delta = -1.0, ssi_baseline = 0.0;
  Index half_width = 12, undersample = 4, n_t = 0, subspace = 50;
  int iters = 10, sweeps = 30, sb_iters = 200;
  bool json_out = false, save_history = false;
};

void run_invert(const InvertOpts& o) {
  o.common.apply();
  const SeismicGrid y = load_grid(o.seismic_path);
  const Wavelet w = parse_wavelet(o.wavelet_text, o.dt, o.half_width);
  const Index nt = o.n_t > 0 ? o.n_t : infer_nt(y.rows(), o.undersample);
  const ForwardOperator K = build_forward(w, nt, o.undersample);
  if (K.m_t() != y.rows())
    throw DimensionMismatch("seismic rows " + std::to_string(y.rows()) +
                            " inconsistent with operator rows " +
                            std::to_string(K.m_t()));

  const InitChoice init = parse_init(o.init_text);
  ImpedanceGrid x0;
  if (init.kind == "ssi") {
    x0 = sparse_spike_invert(K, y, o.alpha > 0 ? o.alpha : 0.6, o.ssi_baseline);
  } else if (init.kind == "sb") {
    const double a = o.alpha >= 0 ? o.alpha : 2.0;
    const double b = o.beta >= 0 ? o.beta : a;
    x0 = split_bregman_2d(K.trace_matrix, y, a, b, o.sb_iters).x;
  } else {
    x0 = load_initializer(init.external_path, nt, y.cols());
  }

  IterationConfig cfg;
  cfg.iterations = o.iters;
  cfg.graph.radius = o.radius;
  cfg.graph.sigma = o.sigma;
  cfg.graph.dist = parse_dist(o.dist_text);
  cfg.solver.subspace_dim = o.subspace;
  cfg.solver.max_sweeps = o.sweeps;
  cfg.record_history = o.save_history;

  std::optional<ImpedanceGrid> truth;
  if (!o.truth_path.empty()) truth = load_grid(o.truth_path);
  std::optional<double> delta_opt;
  if (o.delta >= 0) delta_opt = o.delta;

  const IterationHistory history =
      run(K, y, x0, delta_opt, cfg, truth ? &*truth : nullptr);

  fs::create_directories(o.out_dir);
  save_grid(x0, fs::path(o.out_dir) / "x0.grd");
  save_grid(history.final_iterate(),
            fs::path(o.out_dir) / ("x" + std::to_string(o.iters) + ".grd"));
  if (o.save_history)
    for (size_t n = 1; n + 1 < history.iterates.size(); ++n)
      save_grid(history.iterates[n],
                fs::path(o.out_dir) / ("x" + std::to_string(n) + ".grd"));

  json manifest;
  manifest["command"] = "invert";
  manifest["seismic"] = o.seismic_path;
  manifest["initializer"] = init.kind;
  manifest["n_t"] = nt;
  manifest["undersample"] = o.undersample;
  manifest["delta"] = history.delta_used;
  manifest["delta_estimated"] = history.delta_estimated;
  manifest["graph"] = {{"radius", o.radius}, {"sigma", o.sigma}, {"dist", o.dist_text}};
  json steps = json::array();
  for (size_t n = 0; n < history.reports.size(); ++n) {
    const auto& r = history.reports[n];
    json row = {{"iter", n + 1},
                {"alpha", r.alpha},
                {"residual", r.residual_norm},
                {"sweeps", r.sweeps_used},
                {"flags", r.flags}};
    if (!history.metrics_per_iter.empty()) {
      row["dmse"] = history.metrics_per_iter[n + 1].dmse;
      row["ssim"] = history.metrics_per_iter[n + 1].ssim;
    }
    steps.push_back(row);
  }
  manifest["steps"] = steps;
  if (!history.metrics_per_iter.empty()) {
    manifest["init_dmse"] = history.metrics_per_iter.front().dmse;
    manifest["init_ssim"] = history.metrics_per_iter.front().ssim;
  }
  std::ofstream mf(fs::path(o.out_dir) / "manifest.txt", std::ios::trunc);
  mf << manifest.dump(2) << '\n';
  if (o.json_out) std::cout << manifest.dump() << '\n';
}

int cmd_invert(CLI::App& app) {
  auto o = std::make_shared<InvertOpts>();
  CLI::App* cmd = app.add_subcommand("invert", "reconstruct impedance from seismic data");
  cmd->add_option("--seismic", o->seismic_path, "observed seismic grid (.grd/.csv)")
      ->required();
  cmd->add_option("--out", o->out_dir, "output directory");
  cmd->add_option("--init", o->init_text, "initializer: ssi, sb, or external:PATH");
  cmd->add_option("--wavelet", o->wavelet_text, "ricker:FREQ or a wavelet CSV path");
  cmd->add_option("--dt", o->dt, "sample interval in seconds");
  cmd->add_option("--wavelet-halfwidth", o->half_width, "ricker half width in samples");
  cmd->add_option("--undersample", o->undersample, "time undersampling factor u");
  cmd->add_option("--nt", o->n_t, "impedance time samples (default: inferred)");
  cmd->add_option("--R", o->radius, "graph radius");
  cmd->add_option("--sigma", o->sigma, "graph intensity scale");
  cmd->add_option("--dist", o->dist_text, "pixel distance: l1 or linf");
  cmd->add_option("--iters", o->iters, "outer iterations N");
  cmd->add_option("--alpha", o->alpha, "initializer alpha (SSI or SB)");
  cmd->add_option("--beta", o->beta, "SB beta");
  cmd->add_option("--sb-iters", o->sb_iters, "SB outer iterations");
  cmd->add_option("--ssi-baseline", o->ssi_baseline, "first impedance sample for SSI");
  cmd->add_option("--delta", o->delta, "noise norm bound (default: estimated)");
  cmd->add_option("--subspace", o->subspace, "solver subspace cap d");
  cmd->add_option("--sweeps", o->sweeps, "solver MM sweeps per outer step");
  cmd->add_option("--truth", o->truth_path, "optional ground truth for metrics");
  cmd->add_flag("--json", o->json_out, "machine-readable summary on stdout");
  cmd->add_flag("--save-history", o->save_history, "save every iterate");
  add_common(cmd, o->common);

  cmd->callback([o]() { run_invert(*o); });
  return 0;
}

int cmd_benchmark(CLI::App& app) {
  auto common = std::make_shared<CommonOpts>();
  auto cfg = std::make_shared<BenchmarkConfig>();
  auto levels = std::make_shared<std::vector<double>>(
      std::vector<double>{39.0, 33.0, 30.0, 27.0});
  auto init_text = std::make_shared<std::string>("sb");
  auto dist_text = std::make_shared<std::string>("linf");
  auto out_dir = std::make_shared<std::string>("report");
  auto ssi_alpha = std::make_shared<double>(0.6);
  auto sb_alpha = std::make_shared<double>(2.0);
  auto sb_beta = std::make_shared<double>(-1.0);
  auto sb_iters = std::make_shared<int>(200);
  auto json_out = std::make_shared<bool>(false);
  auto no_plots = std::make_shared<bool>(false);

  CLI::App* cmd = app.add_subcommand("benchmark", "phantom benchmark across noise levels");
  cmd->add_option("--out", *out_dir, "report directory");
  cmd->add_option("--levels", *levels, "noise PSNR levels in dB")->delimiter(',');
  cmd->add_option("--init", *init_text, "initializer: ssi, sb, or external:PATH");
  cmd->add_option("--seed", cfg->phantom.seed, "phantom seed");
  cmd->add_option("--noise-seed", cfg->noise_seed, "noise seed");
  cmd->add_option("--nt", cfg->phantom.n_t, "phantom time samples");
  cmd->add_option("--nx", cfg->phantom.n_x, "phantom traces");
  cmd->add_option("--layers", cfg->phantom.n_layers, "phantom layer count");
  cmd->add_option("--dip", cfg->phantom.dip, "max boundary slope");
  cmd->add_option("--lo", cfg->phantom.impedance_lo, "impedance range low");
  cmd->add_option("--hi", cfg->phantom.impedance_hi, "impedance range high");
  cmd->add_flag("--smooth-background", cfg->phantom.smooth_background,
                "add continuous background trend");
  cmd->add_option("--freq", cfg->wavelet.peak_freq, "ricker peak frequency");
  cmd->add_option("--dt", cfg->wavelet.dt, "sample interval");
  cmd->add_option("--wavelet-halfwidth", cfg->wavelet.half_width, "wavelet half width");
  cmd->add_option("--undersample", cfg->undersample, "undersampling factor");
  cmd->add_option("--iters", cfg->iteration.iterations, "outer iterations");
  cmd->add_option("--R", cfg->iteration.graph.radius, "graph radius");
  cmd->add_option("--sigma", cfg->iteration.graph.sigma, "graph intensity scale");
  cmd->add_option("--dist", *dist_text, "pixel distance: l1 or linf");
  cmd->add_option("--subspace", cfg->iteration.solver.subspace_dim, "solver subspace cap");
  cmd->add_option("--sweeps", cfg->iteration.solver.max_sweeps, "solver sweeps");
  cmd->add_option("--ssi-alpha", *ssi_alpha, "SSI alpha");
  cmd->add_option("--sb-alpha", *sb_alpha, "SB alpha");
  cmd->add_option("--sb-beta", *sb_beta, "SB beta (default: --sb-alpha)");
  cmd->add_option("--sb-iters", *sb_iters, "SB iterations");
  cmd->add_flag("--json", *json_out, "summary json on stdout");
  cmd->add_flag("--no-plots", *no_plots, "skip ppm plots");
  add_common(cmd, *common);

  cmd->callback([=]() {
    common->apply();
    cfg->noise_levels_db = *levels;
    cfg->out_dir = *out_dir;
    cfg->write_plots = !*no_plots;
    cfg->iteration.graph.dist = parse_dist(*dist_text);
    const InitChoice init = parse_init(*init_text);
    if (init.kind == "ssi")
      cfg->init = SsiInit{*ssi_alpha};
    else if (init.kind == "sb")
      cfg->init = SbInit{*sb_alpha, *sb_beta >= 0 ? *sb_beta : *sb_alpha, *sb_iters};
    else
      cfg->init = ExternalInit{init.external_path};

    const BenchmarkReport report = run_benchmark(*cfg);
    json j = json::array();
    for (const auto& cell : report.cells) {
      j.push_back({{"cell", cell.name},
                   {"psnr", cell.psnr_db ? json(*cell.psnr_db) : json()},
                   {"delta", cell.delta},
                   {"init_dmse", cell.init_metrics.dmse},
                   {"init_ssim", cell.init_metrics.ssim},
                   {"final_dmse", cell.final_metrics.dmse},
                   {"final_ssim", cell.final_metrics.ssim}});
    }
    if (*json_out) {
      std::cout << j.dump() << '\n';
    } else {
      std::cout << "cell  init(dmse, ssim)  after-" << cfg->iteration.iterations
                << "(dmse, ssim)\n";
      for (const auto& cell : report.cells)
        std::cout << cell.name << "  (" << cell.init_metrics.dmse << ", "
                  << cell.init_metrics.ssim << ")  (" << cell.final_metrics.dmse
                  << ", " << cell.final_metrics.ssim << ")\n";
    }
  });
  return 0;
}

int cmd_make_phantom(CLI::App& app) {
  auto common = std::make_shared<CommonOpts>();
  auto spec = std::make_shared<PhantomSpec>();
  auto out_path = std::make_shared<std::string>("phantom.grd");
  auto do_normalize = std::make_shared<bool>(false);

  CLI::App* cmd = app.add_subcommand("make-phantom", "generate a layered impedance grid");
  cmd->add_option("--out", *out_path, "output grid path");
  cmd->add_option("--nt", spec->n_t, "time samples");
  cmd->add_option("--nx", spec->n_x, "traces");
  cmd->add_option("--layers", spec->n_layers, "layer count");
  cmd->add_option("--dip", spec->dip, "max boundary slope (samples/trace)");
  cmd->add_option("--lo", spec->impedance_lo, "impedance range low");
  cmd->add_option("--hi", spec->impedance_hi, "impedance range high");
  cmd->add_option("--seed", spec->seed, "random seed");
  cmd->add_flag("--smooth-background", spec->smooth_background, "add continuous trend");
  cmd->add_flag("--normalize", *do_normalize, "save with mean 0, std 1");
  add_common(cmd, *common);

  cmd->callback([=]() {
    common->apply();
    ImpedanceGrid grid = make_phantom(*spec);
    if (*do_normalize) grid = normalize(grid).values;
    save_grid(grid, *out_path);
  });
  return 0;
}

int cmd_estimate_wavelet(CLI::App& app) {
  auto common = std::make_shared<CommonOpts>();
  auto seismic_path = std::make_shared<std::string>();
  auto out_path = std::make_shared<std::string>("wavelet.csv");
  auto length = std::make_shared<Index>(101);
  auto norm_peak = std::make_shared<double>(10.0);
  auto dt = std::make_shared<double>(0.004);
  auto json_out = std::make_shared<bool>(false);

  CLI::App* cmd =
      app.add_subcommand("estimate-wavelet", "spectral wavelet estimate from data");
  cmd->add_option("--seismic", *seismic_path, "seismic grid path")->required();
  cmd->add_option("--out", *out_path, "wavelet CSV output");
  cmd->add_option("--length", *length, "odd output length");
  cmd->add_option("--norm-peak", *norm_peak, "peak magnitude after scaling");
  cmd->add_option("--dt", *dt, "sample interval in seconds");
  cmd->add_flag("--json", *json_out, "print summary json");
  add_common(cmd, *common);

  cmd->callback([=]() {
    common->apply();
    const SeismicGrid y = load_grid(*seismic_path);
    const Wavelet w = estimate_wavelet(y, *length, *norm_peak, *dt);
    save_wavelet(w, *out_path);
    if (*json_out) {
      json j = {{"length", w.samples.size()},
                {"dt", w.dt},
                {"peak", w.samples.cwiseAbs().maxCoeff()}};
      std::cout << j.dump() << '\n';
    }
  });
  return 0;
}

int cmd_metrics(CLI::App& app) {
  auto common = std::make_shared<CommonOpts>();
  auto rec_path = std::make_shared<std::string>();
  auto truth_path = std::make_shared<std::string>();
  auto window = std::make_shared<Index>(11);
  auto json_out = std::make_shared<bool>(false);

  CLI::App* cmd = app.add_subcommand("metrics", "D-MSE and SSIM against a truth grid");
  cmd->add_option("--rec", *rec_path, "reconstruction grid")->required();
  cmd->add_option("--truth", *truth_path, "ground truth grid")->required();
  cmd->add_option("--window", *window, "SSIM window size (odd)");
  cmd->add_flag("--json", *json_out, "json output");
  add_common(cmd, *common);

  cmd->callback([=]() {
    common->apply();
    const Mat rec = load_grid(*rec_path);
    const Mat truth = load_grid(*truth_path);
    SsimConfig scfg;
    scfg.window = *window;
    const double dmse = d_mse(rec, truth);
    const double s = ssim(rec, truth, scfg);
    if (*json_out)
      std::cout << json{{"dmse", dmse}, {"ssim", s}}.dump() << '\n';
    else
      std::cout << "dmse=" << dmse << " ssim=" << s << '\n';
  });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"iterated graph-Laplacian impedance inversion"};
  app.require_subcommand(1);

  cmd_invert(app);
  cmd_benchmark(app);
  cmd_make_phantom(app);
  cmd_estimate_wavelet(app);
  cmd_metrics(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help, exits 0
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
