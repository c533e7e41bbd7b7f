#include "bhd/colored_noise.hpp"

#include <cmath>
#include <complex>
#include <random>

#include "bhd/errors.hpp"
#include "bhd/fft.hpp"
#include "bhd/random.hpp"

namespace bhd {

std::size_t fast_fft_size(std::size_t n) {
  for (std::size_t m = std::max<std::size_t>(n, 1);; ++m) {
    std::size_t r = m;
    for (std::size_t p : {2u, 3u, 5u}) {
      while (r % p == 0) r /= p;
    }
    if (r == 1) return m;
  }
}

std::vector<double> synthesize_samples(const NoisePsd& model, std::size_t n, double sample_rate_hz,
                                       std::uint64_t seed) {
  if (n < 16) throw DomainError("synthesize_colored_noise: need at least 16 samples");
  if (!(sample_rate_hz > 0.0)) throw DomainError("synthesize_colored_noise: sample rate must be > 0");
  if (model.is_zero()) return std::vector<double>(n, 0.0);

  if (model.kind() == NoisePsd::Kind::white) {
    return gaussian_samples(n, std::sqrt(model(1.0) * sample_rate_hz / 2.0), seed);
  }

  const std::size_t m = fast_fft_size(n);
  const std::size_t bins = m / 2 + 1;
  const double df = sample_rate_hz / static_cast<double>(m);
  const double md = static_cast<double>(m);

  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::complex<double>> spec(bins);
  for (std::size_t k = 1; k < bins; ++k) {
    const double f = df * static_cast<double>(k);
    const double s = model(f);
    const bool nyquist = (m % 2 == 0) && k == bins - 1;
    const double re = normal(rng);
    const double im = normal(rng);
    if (nyquist) {
      spec[k] = {std::sqrt(s * sample_rate_hz * md / 2.0) * re, 0.0};
    } else {
      const double sigma = std::sqrt(s * sample_rate_hz * md / 4.0);
      spec[k] = {sigma * re, sigma * im};
    }
  }

  std::vector<double> out(m);
  RealFft(m).inverse(spec, out);
  out.resize(n);
  for (double& v : out) v /= md;
  return out;
}

TimeSeries synthesize_colored_noise(const NoisePsd& model, double duration_s, double sample_rate_hz,
                                    std::uint64_t seed) {
  if (!(duration_s > 0.0)) throw DomainError("synthesize_colored_noise: duration must be > 0");
  const auto n = static_cast<std::size_t>(std::llround(duration_s * sample_rate_hz));
  return TimeSeries(synthesize_samples(model, n, sample_rate_hz, seed), sample_rate_hz, seed);
}

}  // namespace bhd
