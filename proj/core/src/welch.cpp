#include <cmath>
#include <complex>
#include <sstream>

#include "bhd/constants.hpp"
#include "bhd/errors.hpp"
#include "bhd/fft.hpp"
#include "bhd/parallel.hpp"
#include "bhd/spectral.hpp"

namespace bhd {
namespace {

// Segments per reduction chunk. Fixed so the summation order, and therefore
// the result, does not depend on the worker count.
constexpr std::size_t kChunk = 8;

std::size_t segment_length(double fs, double span_hz, std::size_t lines) {
  if (!(span_hz > 0.0)) throw DomainError("welch_psd: span must be > 0");
  if (lines < 2) throw DomainError("welch_psd: need at least 2 lines");
  if (span_hz > fs / 2.0 * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "welch_psd: span " << span_hz << " Hz exceeds Nyquist (" << fs / 2.0 << " Hz)";
    throw DomainError(os.str());
  }
  const double exact = fs * static_cast<double>(lines) / span_hz;
  const double rounded = std::round(exact);
  if (std::abs(exact - rounded) > 1e-9 * exact) {
    std::ostringstream os;
    os << "welch_psd: segment length fs*lines/span = " << exact << " is not an integer";
    throw DomainError(os.str());
  }
  return static_cast<std::size_t>(rounded);
}

}  // namespace

std::size_t welch_required_samples(double fs, double span_hz, std::size_t lines, std::size_t averages) {
  const std::size_t nseg = segment_length(fs, span_hz, lines);
  const std::size_t hop = nseg / 2;
  return nseg + hop * (std::max<std::size_t>(averages, 1) - 1);
}

SpectrumTrace welch_psd(const TimeSeries& series, double span_hz, std::size_t lines, std::size_t averages,
                        unsigned workers) {
  if (averages < 1) throw DomainError("welch_psd: need at least one average");
  const double fs = series.sample_rate_hz();
  const std::size_t nseg = segment_length(fs, span_hz, lines);
  const std::size_t hop = nseg / 2;
  const std::size_t required = nseg + hop * (averages - 1);
  if (series.size() < required) {
    const double need = static_cast<double>(required) / fs;
    std::ostringstream os;
    os << "welch_psd: " << averages << " averages at " << span_hz / static_cast<double>(lines)
       << " Hz RBW need " << need << " s of data, got " << series.duration_s() << " s";
    throw InsufficientDataError(os.str(), need);
  }

  std::vector<double> window(nseg);
  double wsum2 = 0.0;
  for (std::size_t n = 0; n < nseg; ++n) {
    window[n] = 0.5 * (1.0 - std::cos(2.0 * kPi * static_cast<double>(n) / static_cast<double>(nseg)));
    wsum2 += window[n] * window[n];
  }

  const std::size_t nbins = lines + 1;
  const std::size_t nchunks = (averages + kChunk - 1) / kChunk;
  std::vector<std::vector<double>> partial(nchunks, std::vector<double>(nbins, 0.0));
  const RealFft fft(nseg);
  const auto x = series.samples();

  parallel_for(
      nchunks,
      [&](std::size_t c) {
        std::vector<double> seg(nseg);
        std::vector<std::complex<double>> spec(fft.bins());
        auto& acc = partial[c];
        const std::size_t end = std::min(averages, (c + 1) * kChunk);
        for (std::size_t s = c * kChunk; s < end; ++s) {
          const std::size_t off = s * hop;
          for (std::size_t n = 0; n < nseg; ++n) seg[n] = x[off + n] * window[n];
          fft.forward(seg, spec);
          for (std::size_t k = 0; k < nbins; ++k) acc[k] += std::norm(spec[k]);
        }
      },
      workers);

  std::vector<double> total(nbins, 0.0);
  for (const auto& p : partial) {
    for (std::size_t k = 0; k < nbins; ++k) total[k] += p[k];
  }

  SpectrumTrace t;
  t.units = TraceUnits::V2_per_Hz;
  t.raw = true;
  const double rbw = fs / static_cast<double>(nseg);
  const double scale = 1.0 / (fs * wsum2 * static_cast<double>(averages));
  const bool has_nyquist = nseg % 2 == 0 && lines == nseg / 2;
  for (std::size_t k = 0; k < nbins; ++k) {
    const bool single = k == 0 || (has_nyquist && k == lines);
    t.push_back(rbw * static_cast<double>(k), (single ? 1.0 : 2.0) * total[k] * scale, rbw, averages);
  }
  return t;
}

}  // namespace bhd
