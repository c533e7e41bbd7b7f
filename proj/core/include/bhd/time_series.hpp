#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace bhd {

/// Uniformly sampled real record.
class TimeSeries {
 public:
  TimeSeries(std::vector<double> samples, double sample_rate_hz, std::uint64_t seed = 0);

  std::span<const double> samples() const noexcept { return samples_; }
  std::vector<double>& mutable_samples() noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  double sample_rate_hz() const noexcept { return sample_rate_hz_; }
  double duration_s() const noexcept { return static_cast<double>(samples_.size()) / sample_rate_hz_; }
  std::uint64_t seed() const noexcept { return seed_; }

  double operator[](std::size_t i) const { return samples_[i]; }
  double mean() const;
  double variance() const;

 private:
  std::vector<double> samples_;
  double sample_rate_hz_;
  std::uint64_t seed_;
};

}  // namespace bhd
