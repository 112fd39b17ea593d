#include <doctest.h>

#include <cmath>

#include "graphla/errors.hpp"
#include "graphla/grid.hpp"
#include "graphla/metrics.hpp"
#include "graphla/util.hpp"
#include "oracles.hpp"

using namespace graphla;

TEST_SUITE("metrics") {
  TEST_CASE("d_mse hand value on a single trace") {
    Mat truth(3, 1), rec(3, 1);
    truth << 0, 1, 1;
    rec << 0, 0, 0;
    CHECK(d_mse(rec, truth) == 1.0);
    CHECK(d_mse(truth, truth) == 0.0);
  }

  TEST_CASE("d_mse guards and invariances") {
    Mat flat = Mat::Constant(4, 3, 2.0);
    Mat rec = Mat::Zero(4, 3);
    CHECK_THROWS_AS(d_mse(rec, flat), AllFlatTruth);
    CHECK_THROWS_AS(d_mse(Mat::Zero(3, 3), Mat::Zero(4, 3)), DimensionMismatch);

    NormalSampler rng(2);
    const Mat a = rng.matrix(10, 6);
    Mat b = rng.matrix(10, 6);
    b.topRows(3).setZero();  // keep some exact zeros away from the truth diff
    const double base = d_mse(a, b);
    const Mat a5 = a.array() + 5.0;
    const Mat b5 = b.array() + 5.0;
    CHECK(d_mse(a5, b5) == doctest::Approx(base).epsilon(1e-12));
    CHECK(base >= 0.0);
  }

  TEST_CASE("ssim of identical and affinely related grids is 1") {
    NormalSampler rng(8);
    const Mat a = rng.matrix(20, 16);
    CHECK(ssim(a, a) == doctest::Approx(1.0).epsilon(1e-12));
    const Mat b = 5.0 * a.array() + 3.0;
    CHECK(ssim(a, b) == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("ssim matches the brute-force windowed oracle") {
    NormalSampler rng(80);
    const Mat a = rng.matrix(32, 32);
    const Mat b = rng.matrix(32, 32);
    const SsimConfig cfg;
    const double got = ssim(a, b, cfg);
    const Mat na = normalize(a).values;
    const Mat nb = normalize(b).values;
    const double want = oracles::ssim_bruteforce(na, nb, cfg.window, cfg.c1, cfg.c2);
    CHECK(got == doctest::Approx(want).epsilon(1e-10));
  }

  TEST_CASE("ssim is symmetric and bounded") {
    NormalSampler rng(81);
    for (int trial = 0; trial < 5; ++trial) {
      const Mat a = rng.matrix(16, 14);
      const Mat b = rng.matrix(16, 14);
      const double ab = ssim(a, b);
      const double ba = ssim(b, a);
      CHECK(ab == doctest::Approx(ba).epsilon(1e-12));
      CHECK(ab >= -1.0 - 1e-9);
      CHECK(ab <= 1.0 + 1e-9);
    }
  }

  TEST_CASE("ssim guards") {
    NormalSampler rng(82);
    const Mat small = rng.matrix(8, 8);
    CHECK_THROWS_AS(ssim(small, small), GridTooSmall);
    const Mat flat = Mat::Ones(16, 16);
    CHECK_THROWS_AS(ssim(flat, flat), ZeroVariance);
  }

  TEST_CASE("psnr definition and log law") {
    Mat clean = Mat::Zero(10, 10);
    clean(0, 0) = 1.0;  // peak 1
    NormalSampler rng(3);
    Mat noise = rng.matrix(10, 10);
    noise *= std::sqrt(1e-3 * 100.0) / noise.norm();  // mse exactly 1e-3
    CHECK(psnr(clean, clean + noise) == doctest::Approx(30.0).epsilon(1e-9));
    CHECK(psnr(clean, clean + 10.0 * noise) == doctest::Approx(10.0).epsilon(1e-9));
    CHECK_THROWS_AS(psnr(clean, clean), IdenticalInputs);
  }

  TEST_CASE("add_noise_to_psnr hits the target and reports the exact norm") {
    NormalSampler rng(4);
    const Mat clean = rng.matrix(40, 30);
    for (double target : {39.0, 33.0, 30.0, 27.0}) {
      const auto [noisy, delta] = add_noise_to_psnr(clean, target, 1234);
      CHECK(psnr(clean, noisy) == doctest::Approx(target).epsilon(1e-6));
      CHECK((noisy - clean).norm() == delta);
    }
    const auto [a, d1] = add_noise_to_psnr(clean, 30.0, 77);
    const auto [b, d2] = add_noise_to_psnr(clean, 30.0, 77);
    CHECK((a.array() == b.array()).all());
    CHECK(d1 == d2);
    const auto [c27, dd27] = add_noise_to_psnr(clean, 27.0, 9);
    const auto [c39, dd39] = add_noise_to_psnr(clean, 39.0, 9);
    CHECK(dd27 > dd39);
  }
}
