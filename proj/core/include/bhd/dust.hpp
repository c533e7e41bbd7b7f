#pragma once

#include <cstdint>
#include <vector>

#include "bhd/time_series.hpp"

namespace bhd {

enum class PulseShape { raised_cosine, rectangular };

struct DustEvent {
  double start_s = 0.0;
  double depth = 0.0;     // peak fractional loss
  double duration_s = 0.0;
};

/// Poisson arrivals of transient losses. Depth and duration are drawn
/// log-uniformly between their bounds.
struct DustEventProcess {
  double rate_hz = 0.0;
  double depth_min = 0.001;
  double depth_max = 0.012;
  double duration_min_s = 0.010;
  double duration_max_s = 0.500;
  PulseShape pulse_shape = PulseShape::raised_cosine;

  void validate() const;
};

std::vector<DustEvent> draw_dust_events(const DustEventProcess& proc, double duration_s, std::uint64_t seed);

/// Loss trace: zero baseline, pulses summed and clamped below 1.
TimeSeries render_dust_events(const std::vector<DustEvent>& events, PulseShape shape, double duration_s,
                              double sample_rate_hz, std::uint64_t seed = 0);

TimeSeries sample_dust_events(const DustEventProcess& proc, double duration_s, std::uint64_t seed,
                              double sample_rate_hz = 1000.0);

}  // namespace bhd
