#pragma once

#include <cstdint>
#include <vector>

#include "bhd/noise_psd.hpp"
#include "bhd/time_series.hpp"

namespace bhd {

/// Gaussian noise whose one-sided PSD follows `model`, synthesized in the
/// frequency domain. The DC bin is zero. Deterministic in `seed`.
TimeSeries synthesize_colored_noise(const NoisePsd& model, double duration_s, double sample_rate_hz,
                                    std::uint64_t seed);

/// Same, sized in samples. n >= 16.
std::vector<double> synthesize_samples(const NoisePsd& model, std::size_t n, double sample_rate_hz,
                                       std::uint64_t seed);

/// Smallest 2^a 3^b 5^c >= n.
std::size_t fast_fft_size(std::size_t n);

}  // namespace bhd
