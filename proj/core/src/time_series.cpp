#include "bhd/time_series.hpp"

#include <cmath>
#include <string>

#include "bhd/errors.hpp"

namespace bhd {

TimeSeries::TimeSeries(std::vector<double> samples, double sample_rate_hz, std::uint64_t seed)
    : samples_(std::move(samples)), sample_rate_hz_(sample_rate_hz), seed_(seed) {
  if (!(sample_rate_hz_ > 0.0) || !std::isfinite(sample_rate_hz_)) {
    throw DomainError("TimeSeries: sample rate must be positive and finite");
  }
  if (samples_.size() < 2) throw DomainError("TimeSeries: need at least 2 samples");
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (!std::isfinite(samples_[i])) {
      throw DomainError("TimeSeries: non-finite sample at index " + std::to_string(i));
    }
  }
}

double TimeSeries::mean() const {
  double s = 0.0;
  for (double v : samples_) s += v;
  return s / static_cast<double>(samples_.size());
}

double TimeSeries::variance() const {
  const double m = mean();
  double s = 0.0;
  for (double v : samples_) s += (v - m) * (v - m);
  return s / static_cast<double>(samples_.size() - 1);
}

}  // namespace bhd
