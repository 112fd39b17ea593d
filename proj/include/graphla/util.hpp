#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <random>

#include "graphla/types.hpp"

namespace graphla {

// FNV-1a over raw bytes; used for content digests in manifests and the
// guide hash stored with a graph Laplacian.
inline std::uint64_t fnv1a64(const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 1469598103934665603ull;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

inline std::uint64_t digest(const Mat& m) {
  std::uint64_t h = fnv1a64(m.data(), sizeof(double) * static_cast<size_t>(m.size()));
  const std::int64_t shape[2] = {m.rows(), m.cols()};
  h ^= fnv1a64(shape, sizeof(shape));
  return h;
}

// Seeded standard-normal sampler. Box-Muller over mt19937_64 rather than
// std::normal_distribution, whose output is implementation-defined and
// would break the byte-identical determinism contracts.
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : rng_(seed) {}

  double operator()() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform01();
    } while (u1 <= 0.0);
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  Mat matrix(Index rows, Index cols) {
    Mat m(rows, cols);
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) m(i, j) = (*this)();
    return m;
  }

  double uniform01() {
    // 53-bit mantissa in [0, 1)
    return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace graphla
