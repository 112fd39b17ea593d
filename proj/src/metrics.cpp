#include "graphla/metrics.hpp"

#include <cmath>

#include "graphla/errors.hpp"
#include "graphla/grid.hpp"
#include "graphla/util.hpp"

namespace graphla {

namespace {

Mat time_diff(const Mat& g) {
  return g.topRows(g.rows() - 1) - g.bottomRows(g.rows() - 1);
}

// Inclusive rectangle sums via a summed-area table with a zero border.
struct AreaTable {
  Mat s;
  explicit AreaTable(const Mat& g) : s(Mat::Zero(g.rows() + 1, g.cols() + 1)) {
    for (Index i = 0; i < g.rows(); ++i)
      for (Index j = 0; j < g.cols(); ++j)
        s(i + 1, j + 1) = g(i, j) + s(i, j + 1) + s(i + 1, j) - s(i, j);
  }
  double window(Index i, Index j, Index w) const {
    return s(i + w, j + w) - s(i, j + w) - s(i + w, j) + s(i, j);
  }
};

}  // namespace

double d_mse(const ImpedanceGrid& rec, const ImpedanceGrid& truth) {
  if (rec.rows() != truth.rows() || rec.cols() != truth.cols())
    throw DimensionMismatch("d_mse: shapes differ");
  if (truth.rows() < 2) throw DimensionMismatch("d_mse: need at least 2 rows");
  const Mat dr = time_diff(rec);
  const Mat dt = time_diff(truth);
  const Index nonzero = (dt.array() != 0.0).count();
  if (nonzero == 0) throw AllFlatTruth("d_mse: truth differential is all zero");
  return (dr - dt).squaredNorm() / static_cast<double>(nonzero);
}

double ssim(const ImpedanceGrid& a, const ImpedanceGrid& b, const SsimConfig& cfg) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch("ssim: shapes differ");
  if (cfg.window < 1 || cfg.window % 2 == 0 || cfg.c1 <= 0.0 || cfg.c2 <= 0.0)
    throw OutOfBounds("ssim: invalid config");
  if (a.rows() < cfg.window || a.cols() < cfg.window)
    throw GridTooSmall("ssim: grid smaller than the window");

  const Mat na = normalize(a).values;
  const Mat nb = normalize(b).values;

  const Index w = cfg.window;
  const double count = static_cast<double>(w * w);
  const AreaTable sa(na), sb(nb);
  const AreaTable saa(Mat(na.array().square()));
  const AreaTable sbb(Mat(nb.array().square()));
  const AreaTable sab(Mat(na.array() * nb.array()));

  double total = 0.0;
  Index windows = 0;
  for (Index i = 0; i + w <= na.rows(); ++i) {
    for (Index j = 0; j + w <= na.cols(); ++j) {
      const double mu_a = sa.window(i, j, w) / count;
      const double mu_b = sb.window(i, j, w) / count;
      const double var_a = saa.window(i, j, w) / count - mu_a * mu_a;
      const double var_b = sbb.window(i, j, w) / count - mu_b * mu_b;
      const double cov = sab.window(i, j, w) / count - mu_a * mu_b;
      const double num = (2.0 * mu_a * mu_b + cfg.c1) * (2.0 * cov + cfg.c2);
      const double den =
          (mu_a * mu_a + mu_b * mu_b + cfg.c1) * (var_a + var_b + cfg.c2);
      total += num / den;
      ++windows;
    }
  }
  return total / static_cast<double>(windows);
}

double psnr(const Mat& clean, const Mat& noisy) {
  if (clean.rows() != noisy.rows() || clean.cols() != noisy.cols())
    throw DimensionMismatch("psnr: shapes differ");
  const double mse =
      (clean - noisy).squaredNorm() / static_cast<double>(clean.size());
  if (mse == 0.0) throw IdenticalInputs("psnr: inputs identical");
  const double peak = clean.cwiseAbs().maxCoeff();
  return 10.0 * std::log10(peak * peak / mse);
}

std::pair<SeismicGrid, double> add_noise_to_psnr(const SeismicGrid& clean,
                                                 double target_psnr,
                                                 std::uint64_t seed) {
  if (!std::isfinite(target_psnr))
    throw OutOfBounds("add_noise_to_psnr: target must be finite");
  const double peak = clean.cwiseAbs().maxCoeff();
  if (peak == 0.0) throw ZeroVariance("add_noise_to_psnr: clean grid is zero");
  const double mse_target = peak * peak * std::pow(10.0, -target_psnr / 10.0);

  NormalSampler sampler(seed);
  Mat noise = sampler.matrix(clean.rows(), clean.cols());
  const double scale =
      std::sqrt(mse_target * static_cast<double>(clean.size())) / noise.norm();
  SeismicGrid noisy = clean + scale * noise;
  const double delta = (noisy - clean).norm();
  return {std::move(noisy), delta};
}

}  // namespace graphla
