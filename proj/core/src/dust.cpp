#include "bhd/dust.hpp"

#include <cmath>
#include <random>

#include "bhd/constants.hpp"
#include "bhd/errors.hpp"
#include "bhd/random.hpp"

namespace bhd {

void DustEventProcess::validate() const {
  if (!(rate_hz >= 0.0)) throw DomainError("dust: rate_hz must be >= 0");
  if (!(depth_min > 0.0) || !(depth_max >= depth_min) || !(depth_max < 1.0)) {
    throw DomainError("dust: depth range must satisfy 0 < depth_min <= depth_max < 1");
  }
  if (!(duration_min_s > 0.0) || !(duration_max_s >= duration_min_s)) {
    throw DomainError("dust: duration range must satisfy 0 < min <= max");
  }
}

std::vector<DustEvent> draw_dust_events(const DustEventProcess& proc, double duration_s, std::uint64_t seed) {
  proc.validate();
  if (!(duration_s > 0.0)) throw DomainError("dust: duration must be > 0");
  std::vector<DustEvent> events;
  if (proc.rate_hz == 0.0) return events;

  Rng rng(seed);
  std::exponential_distribution<double> gap(proc.rate_hz);
  std::uniform_real_distribution<double> depth(std::log(proc.depth_min), std::log(proc.depth_max));
  std::uniform_real_distribution<double> width(std::log(proc.duration_min_s), std::log(proc.duration_max_s));
  for (double t = gap(rng); t < duration_s; t += gap(rng)) {
    events.push_back({t, std::exp(depth(rng)), std::exp(width(rng))});
  }
  return events;
}

TimeSeries render_dust_events(const std::vector<DustEvent>& events, PulseShape shape, double duration_s,
                              double sample_rate_hz, std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(std::llround(duration_s * sample_rate_hz));
  std::vector<double> loss(std::max<std::size_t>(n, 2), 0.0);
  const double dt = 1.0 / sample_rate_hz;
  for (const auto& ev : events) {
    const auto i0 = static_cast<std::size_t>(std::max(0.0, std::ceil(ev.start_s / dt)));
    for (std::size_t i = i0; i < loss.size(); ++i) {
      const double u = (static_cast<double>(i) * dt - ev.start_s) / ev.duration_s;
      if (u >= 1.0) break;
      loss[i] += shape == PulseShape::rectangular ? ev.depth : ev.depth * 0.5 * (1.0 - std::cos(2.0 * kPi * u));
    }
  }
  const double ceiling = std::nextafter(1.0, 0.0);
  for (double& v : loss) v = std::min(v, ceiling);
  return TimeSeries(std::move(loss), sample_rate_hz, seed);
}

TimeSeries sample_dust_events(const DustEventProcess& proc, double duration_s, std::uint64_t seed,
                              double sample_rate_hz) {
  return render_dust_events(draw_dust_events(proc, duration_s, seed), proc.pulse_shape, duration_s,
                            sample_rate_hz, seed);
}

}  // namespace bhd
