#include "graphla/forward.hpp"

#include <Eigen/Cholesky>
#include <unsupported/Eigen/FFT>

#include <charconv>
#include <cmath>
#include <complex>
#include <fstream>
#include <vector>

#include "graphla/errors.hpp"

namespace graphla {

Wavelet ricker(double peak_freq, double dt, Index half_width) {
  if (peak_freq <= 0.0 || dt <= 0.0 || half_width < 1)
    throw OutOfBounds("ricker: need peak_freq > 0, dt > 0, half_width >= 1");
  Wavelet w;
  w.dt = dt;
  w.peak_freq = peak_freq;
  w.samples.resize(2 * half_width + 1);
  for (Index k = 0; k < w.samples.size(); ++k) {
    const double t = static_cast<double>(k - half_width) * dt;
    const double a = M_PI * M_PI * peak_freq * peak_freq * t * t;
    w.samples[k] = (1.0 - 2.0 * a) * std::exp(-a);
  }
  return w;
}

SpMat time_difference_operator(Index n_t) {
  if (n_t < 2) throw OutOfBounds("time_difference_operator: n_t >= 2 required");
  SpMat d(n_t - 1, n_t);
  std::vector<Triplet> entries;
  entries.reserve(static_cast<size_t>(2 * (n_t - 1)));
  for (Index i = 0; i + 1 < n_t; ++i) {
    entries.emplace_back(static_cast<int>(i), static_cast<int>(i), 1.0);
    entries.emplace_back(static_cast<int>(i), static_cast<int>(i + 1), -1.0);
  }
  d.setFromTriplets(entries.begin(), entries.end());
  return d;
}

namespace {

// 'same'-length convolution matrix with zero boundary: row i picks the
// wavelet samples that overlap position i of an n-sample signal.
SpMat convolution_matrix(const Vec& wavelet, Index n) {
  const Index c = (wavelet.size() - 1) / 2;
  SpMat w(n, n);
  std::vector<Triplet> entries;
  entries.reserve(static_cast<size_t>(n * wavelet.size()));
  for (Index i = 0; i < n; ++i) {
    for (Index k = 0; k < wavelet.size(); ++k) {
      const Index j = i + c - k;  // (w * s)(i) = sum_k w(k) s(i + c - k)
      if (j >= 0 && j < n)
        entries.emplace_back(static_cast<int>(i), static_cast<int>(j), wavelet[k]);
    }
  }
  w.setFromTriplets(entries.begin(), entries.end());
  return w;
}

SpMat decimation_matrix(Index n, Index u) {
  const Index m = (n - 1) / u + 1;  // rows 0, u, 2u, ...
  SpMat d(m, n);
  std::vector<Triplet> entries;
  entries.reserve(static_cast<size_t>(m));
  for (Index i = 0; i < m; ++i)
    entries.emplace_back(static_cast<int>(i), static_cast<int>(i * u), 1.0);
  d.setFromTriplets(entries.begin(), entries.end());
  return d;
}

}  // namespace

SeismicGrid ForwardOperator::apply(const ImpedanceGrid& x) const {
  if (x.rows() != n_t()) throw DimensionMismatch("forward apply: wrong row count");
  return trace_matrix * x;
}

ImpedanceGrid ForwardOperator::apply_adjoint(const SeismicGrid& y) const {
  if (y.rows() != m_t())
    throw DimensionMismatch("forward apply_adjoint: wrong row count");
  return trace_matrix.transpose() * y;
}

ForwardOperator build_forward(const Wavelet& wavelet, Index n_t, Index undersample) {
  if (undersample < 1) throw OutOfBounds("build_forward: undersample >= 1");
  if (n_t < 2) throw OutOfBounds("build_forward: n_t >= 2");
  if (wavelet.samples.size() >= n_t)
    throw WaveletTooLong("build_forward: wavelet length must be < n_t");
  if (wavelet.samples.size() % 2 == 0)
    throw WaveletTooLong("build_forward: wavelet length must be odd");
  ForwardOperator fo;
  fo.wavelet = wavelet;
  fo.undersample = undersample;
  const SpMat conv = convolution_matrix(wavelet.samples, n_t - 1);
  const SpMat dec = decimation_matrix(n_t - 1, undersample);
  fo.refl_matrix = dec * conv;
  fo.trace_matrix = fo.refl_matrix * time_difference_operator(n_t);
  return fo;
}

Wavelet estimate_wavelet(const SeismicGrid& seismic, Index length,
                         double norm_peak, double dt) {
  const Index m = seismic.rows();
  const Index n_traces = seismic.cols();
  if (m == 0 || n_traces == 0)
    throw DimensionMismatch("estimate_wavelet: empty seismic grid");
  if (length < 1 || length > m || length % 2 == 0)
    throw OutOfBounds("estimate_wavelet: length must be odd and <= m_t");

  Eigen::FFT<double> fft;
  Vec mean_mag = Vec::Zero(m);
  std::vector<std::complex<double>> spectrum(static_cast<size_t>(m));
  std::vector<double> trace(static_cast<size_t>(m));
  for (Index j = 0; j < n_traces; ++j) {
    for (Index i = 0; i < m; ++i) trace[static_cast<size_t>(i)] = seismic(i, j);
    fft.fwd(spectrum, trace);
    for (Index i = 0; i < m; ++i)
      mean_mag[i] += std::abs(spectrum[static_cast<size_t>(i)]);
  }
  mean_mag /= static_cast<double>(n_traces);
  if (mean_mag.maxCoeff() <= 0.0)
    throw DegenerateSpectrum("estimate_wavelet: all-zero spectrum");

  // Inverse transform of a nonnegative magnitude spectrum: real part only,
  // peak lands at sample 0, so center it circularly before truncating.
  std::vector<std::complex<double>> mag(static_cast<size_t>(m));
  for (Index i = 0; i < m; ++i) mag[static_cast<size_t>(i)] = {mean_mag[i], 0.0};
  std::vector<std::complex<double>> time(static_cast<size_t>(m));
  fft.inv(time, mag);

  const Index h = (length - 1) / 2;
  Wavelet w;
  w.dt = dt;
  w.samples.resize(length);
  for (Index k = -h; k <= h; ++k) {
    const Index src = ((k % m) + m) % m;
    w.samples[k + h] = time[static_cast<size_t>(src)].real();
  }
  const double peak = w.samples.cwiseAbs().maxCoeff();
  if (peak <= 0.0) throw DegenerateSpectrum("estimate_wavelet: zero wavelet");
  w.samples *= norm_peak / peak;
  return w;
}

Mat fit_operator(const Mat& impedance, const Mat& seismic, double ridge) {
  if (impedance.cols() != seismic.cols())
    throw DimensionMismatch("fit_operator: trace counts differ");
  Mat gram = impedance * impedance.transpose();
  gram.diagonal().array() += ridge;
  Eigen::LDLT<Mat> chol(gram);
  // K X = Y in least squares: K = Y X^T (X X^T + ridge I)^-1
  Mat kt = chol.solve(impedance * seismic.transpose());
  return kt.transpose();
}

void save_wavelet(const Wavelet& w, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoFailure("cannot open for writing: " + path.string());
  out << "# dt=" << w.dt << '\n';
  char buf[32];
  for (Index i = 0; i < w.samples.size(); ++i) {
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), w.samples[i]);
    (void)ec;
    out.write(buf, ptr - buf);
    out.put('\n');
  }
  if (!out) throw IoFailure("write failed: " + path.string());
}

Wavelet load_wavelet(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open " + path.string());
  Wavelet w;
  std::vector<double> samples;
  std::string line;
  bool have_dt = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto pos = line.find("dt=");
      if (pos != std::string::npos) {
        double dt = 0.0;
        auto [ptr, ec] =
            std::from_chars(line.data() + pos + 3, line.data() + line.size(), dt);
        (void)ptr;
        if (ec == std::errc{} && dt > 0.0) {
          w.dt = dt;
          have_dt = true;
        }
      }
      continue;
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
    (void)ptr;
    if (ec != std::errc{})
      throw MalformedHeader("bad wavelet sample in " + path.string());
    samples.push_back(v);
  }
  if (samples.empty() || !have_dt)
    throw MalformedHeader("wavelet file needs a # dt= header and samples: " +
                          path.string());
  w.samples = Eigen::Map<const Vec>(samples.data(), static_cast<Index>(samples.size()));
  return w;
}

}  // namespace graphla
