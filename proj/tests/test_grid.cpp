#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "graphla/errors.hpp"
#include "graphla/grid.hpp"
#include "graphla/util.hpp"

using namespace graphla;
namespace fs = std::filesystem;

namespace {
fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / ("graphla_grid_" + name);
}
}  // namespace

TEST_SUITE("grid") {
  TEST_CASE("normalize rejects constant input") {
    Mat g = Mat::Ones(2, 2);
    CHECK_THROWS_AS(normalize(g), ZeroVariance);
  }

  TEST_CASE("normalize two-sample column") {
    Mat g(2, 1);
    g << 0, 2;
    const Normalized n = normalize(g);
    CHECK(n.mean == doctest::Approx(1.0));
    CHECK(n.std == doctest::Approx(1.0));
    CHECK(n.values(0, 0) == doctest::Approx(-1.0));
    CHECK(n.values(1, 0) == doctest::Approx(1.0));
  }

  TEST_CASE("normalize is idempotent and inverts exactly") {
    NormalSampler rng(42);
    for (int trial = 0; trial < 10; ++trial) {
      const Mat g = 5.0 * rng.matrix(7, 5).array() + 3.0;
      const Normalized n = normalize(g);
      const double count = static_cast<double>(g.size());
      CHECK(std::abs(n.values.sum() / count) < 1e-12);
      const double std_out = std::sqrt(n.values.array().square().sum() / count);
      CHECK(std_out == doctest::Approx(1.0).epsilon(1e-12));
      const Normalized again = normalize(n.values);
      CHECK((again.values - n.values).cwiseAbs().maxCoeff() < 1e-12);
      const Mat restored = (n.values.array() * n.std + n.mean).matrix();
      CHECK((restored - g).cwiseAbs().maxCoeff() < 1e-12 * g.cwiseAbs().maxCoeff());
    }
  }

  TEST_CASE("binary round trip is bit exact") {
    NormalSampler rng(7);
    for (int trial = 0; trial < 5; ++trial) {
      const Mat g = rng.matrix(3 + trial, 2 + trial) * 1e3;
      const fs::path p = temp_file("roundtrip.grd");
      save_grid(g, p);
      const Mat back = load_grid(p);
      REQUIRE(back.rows() == g.rows());
      REQUIRE(back.cols() == g.cols());
      CHECK((back.array() == g.array()).all());
    }
  }

  TEST_CASE("csv round trip is bit exact") {
    NormalSampler rng(11);
    const Mat g = rng.matrix(6, 4) * 1e-7;
    const fs::path p = temp_file("roundtrip.csv");
    save_grid(g, p);
    const Mat back = load_grid(p);
    CHECK((back.array() == g.array()).all());
  }

  TEST_CASE("csv literal fixture") {
    const fs::path p = temp_file("fixture.csv");
    std::ofstream(p) << "0,1\n2,3";
    const Mat g = load_grid(p);
    REQUIRE(g.rows() == 2);
    REQUIRE(g.cols() == 2);
    CHECK(g(0, 0) == 0);
    CHECK(g(0, 1) == 1);
    CHECK(g(1, 0) == 2);
    CHECK(g(1, 1) == 3);
  }

  TEST_CASE("truncated binary file fails with MalformedHeader") {
    const fs::path p = temp_file("trunc.grd");
    Mat g(3, 2);
    g << 1, 2, 3, 4, 5, 6;
    save_grid(g, p);
    const auto full = fs::file_size(p);
    fs::resize_file(p, full - 9);
    CHECK_THROWS_AS(load_grid(p), MalformedHeader);
  }

  TEST_CASE("ragged csv fails with DimensionMismatch") {
    const fs::path p = temp_file("ragged.csv");
    std::ofstream(p) << "0,1\n2\n";
    CHECK_THROWS_AS(load_grid(p), DimensionMismatch);
  }

  TEST_CASE("missing file fails with IoFailure") {
    CHECK_THROWS_AS(load_grid(temp_file("does_not_exist.grd")), IoFailure);
  }
}
