#include "bhd/scatter.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include "bhd/colored_noise.hpp"
#include "bhd/constants.hpp"
#include "bhd/errors.hpp"
#include "bhd/parallel.hpp"
#include "bhd/random.hpp"

namespace bhd {

ScatterLocation parse_scatter_location(std::string_view name) {
  if (name == "arm1" || name == "1") return ScatterLocation::arm1;
  if (name == "lo_path_pre_bs" || name == "2") return ScatterLocation::lo_path_pre_bs;
  if (name == "lo_path_pre_mc" || name == "3") return ScatterLocation::lo_path_pre_mc;
  if (name == "signal_port" || name == "4") return ScatterLocation::signal_port;
  throw DomainError("unknown scatter location '" + std::string(name) +
                    "' (arm1, lo_path_pre_bs, lo_path_pre_mc, signal_port)");
}

std::string_view to_string(ScatterLocation l) {
  switch (l) {
    case ScatterLocation::arm1: return "arm1";
    case ScatterLocation::lo_path_pre_bs: return "lo_path_pre_bs";
    case ScatterLocation::lo_path_pre_mc: return "lo_path_pre_mc";
    case ScatterLocation::signal_port: return "signal_port";
  }
  return "?";
}

NoisePsd default_displacement_psd(double level, double corner_hz) {
  return NoisePsd::broken_power_law(level, corner_hz, 2.0, 0.0);
}

void ScatterPath::validate() const {
  if (!(backscatter_power_fraction >= 0.0 && backscatter_power_fraction < 1.0)) {
    throw DomainError("backscatter_power_fraction must be in [0,1)");
  }
  if (!(isolation_db >= 0.0)) throw DomainError("isolation_db must be >= 0");
  if (!(isolator_self_scatter >= 0.0 && isolator_self_scatter < 1.0)) {
    throw DomainError("isolator_self_scatter must be in [0,1)");
  }
}

double ScatterPath::effective_fraction() const {
  return backscatter_power_fraction * std::pow(10.0, -isolation_db / 10.0) + isolator_self_scatter;
}

double triangle_wave(double cycles) {
  const double u = cycles - std::floor(cycles);
  return 1.0 - 2.0 * std::abs(u - 0.5);
}

DiodeWeights location_weights(ScatterLocation where, const HomodyneOptics& o) {
  o.validate();
  const double arm1 = o.eta_pd1 * (1.0 - o.eta_l);
  switch (where) {
    case ScatterLocation::arm1:
      // The scatter rides on the arm-1 beam only.
      return {o.eta_bs * arm1, 0.0};
    case ScatterLocation::lo_path_pre_bs:
    case ScatterLocation::lo_path_pre_mc:
      // Intensity modulation of the LO, split like the LO itself.
      return {o.eta_bs * arm1, (1.0 - o.eta_bs) * o.eta_pd2};
    case ScatterLocation::signal_port: {
      // Beats with the LO on the beamsplitter, opposite sign on the two outputs.
      const double t = std::sqrt(o.eta_bs * (1.0 - o.eta_bs));
      return {t * arm1, -t * o.eta_pd2};
    }
  }
  return {};
}

std::vector<double> phase_trajectory(const ScatterPath& path, std::size_t n, double fs, std::uint64_t seed) {
  double phi0;
  if (path.static_fringe_phase) {
    phi0 = *path.static_fringe_phase;
  } else {
    Rng rng(derive_seed(seed, "fringe_phase"));
    phi0 = std::uniform_real_distribution<double>(0.0, 2.0 * kPi)(rng);
  }
  std::vector<double> phase = synthesize_samples(path.phase_process, n, fs, derive_seed(seed, "displacement"));
  const double k = 4.0 * kPi / kWavelength;
  for (double& p : phase) p = phi0 + k * p;
  return phase;
}

void apply_dither(std::span<double> phase, const DitherDrive& d, double fs) {
  if (!d.enabled || d.amplitude_cycles == 0.0) return;
  if (!(d.frequency_hz > 0.0)) throw DomainError("dither frequency must be > 0");
  const double amp = 2.0 * kPi * d.amplitude_cycles;
  for (std::size_t i = 0; i < phase.size(); ++i) {
    phase[i] += amp * triangle_wave(d.frequency_hz * static_cast<double>(i) / fs);
  }
}

namespace {

double scattered_power(const ScatterPath& path, double lo_power_w) {
  path.validate();
  const double psc = path.effective_fraction() * lo_power_w;
  if (psc > 0.01 * lo_power_w) {
    std::ostringstream os;
    os << "scattered power " << psc << " W exceeds 1 % of the LO (" << lo_power_w
       << " W); the linear beat model does not apply";
    throw LinearizationError(os.str());
  }
  return psc;
}

}  // namespace

double fringe_intensity(const ScatterPath& path, double lo_power_w, double phase_rad) {
  const double psc = scattered_power(path, lo_power_w);
  return 2.0 * std::sqrt(lo_power_w * psc) * std::cos(phase_rad);
}

FringeIntensity fringe_intensity(const ScatterPath& path, const HomodyneOptics& optics, double lo_power_w,
                                 std::span<const double> phase, double fs, double mc_linewidth_hz) {
  const double psc = scattered_power(path, lo_power_w);
  const DiodeWeights w = location_weights(path.forward_location, optics);
  const double beat = 2.0 * std::sqrt(lo_power_w * psc);
  std::vector<double> dp(phase.size());
  for (std::size_t i = 0; i < phase.size(); ++i) dp[i] = beat * std::cos(phase[i]);

  if (path.forward_location == ScatterLocation::lo_path_pre_mc && mc_linewidth_hz > 0.0) {
    // Transmission through the modecleaner: single pole at half the linewidth.
    const double a = std::exp(-2.0 * kPi * (mc_linewidth_hz / 2.0) / fs);
    double y = dp.empty() ? 0.0 : dp.front();
    for (double& v : dp) {
      y = a * y + (1.0 - a) * v;
      v = y;
    }
  }

  FringeIntensity out;
  out.diode1_w.resize(dp.size());
  out.diode2_w.resize(dp.size());
  for (std::size_t i = 0; i < dp.size(); ++i) {
    out.diode1_w[i] = w.w1 * dp[i];
    out.diode2_w[i] = w.w2 * dp[i];
  }
  return out;
}

namespace {

SpectrumTrace fringe_spectrum(const FringeIntensity& fi, const ScatterAnalysis& a, ScatterChannel channel,
                              double shot_floor, std::uint64_t seed) {
  const double to_amps = kElectronCharge / kPhotonEnergy;
  std::vector<double> v(fi.diode1_w.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double i1 = a.g1 * to_amps * fi.diode1_w[i];
    const double i2 = a.g2 * to_amps * fi.diode2_w[i];
    v[i] = channel == ScatterChannel::differential ? i1 - i2 : (channel == ScatterChannel::diode1 ? i1 : i2);
  }
  SpectrumTrace t = welch_psd(TimeSeries(std::move(v), a.rate(), seed), a.span_hz, a.lines, a.averages, a.workers);
  for (double& x : t.value) x /= shot_floor;
  t.units = TraceUnits::shot_relative;
  return t;
}

double analysis_shot_floor(const ScatterAnalysis& a) {
  const auto c = derive_coefficients(LocalOscillator::from_power(a.lo_power_w), a.optics);
  const double e2 = kElectronCharge * kElectronCharge;
  return e2 * kVacuumQuadraturePsd * (a.g1 * a.g1 * c.diode1.dc + a.g2 * a.g2 * c.diode2.dc);
}

}  // namespace

SpectrumTrace scatter_psd(const ScatterPath& path, const DitherDrive& dither, const ScatterAnalysis& a,
                          std::uint64_t seed, ScatterChannel channel) {
  const double fs = a.rate();
  const std::size_t n = welch_required_samples(fs, a.span_hz, a.lines, a.averages);
  std::vector<double> phase = phase_trajectory(path, n, fs, seed);
  apply_dither(phase, dither, fs);
  const auto fi = fringe_intensity(path, a.optics, a.lo_power_w, phase, fs, a.modecleaner_linewidth_hz);
  return fringe_spectrum(fi, a, channel, analysis_shot_floor(a), seed);
}

std::vector<DitherScanPoint> dither_amplitude_scan(const ScatterPath& path, double dither_frequency_hz,
                                                   const std::vector<double>& amplitudes,
                                                   const ScatterAnalysis& a, double band_hi_hz,
                                                   std::uint64_t seed) {
  if (amplitudes.empty()) throw DomainError("dither_amplitude_scan: no amplitudes");
  const double fs = a.rate();
  const std::size_t n = welch_required_samples(fs, a.span_hz, a.lines, a.averages);
  const std::vector<double> base = phase_trajectory(path, n, fs, seed);
  const double shot = analysis_shot_floor(a);
  std::vector<DitherScanPoint> out(amplitudes.size());
  ScatterAnalysis inner = a;
  inner.workers = 1;
  parallel_for(
      amplitudes.size(),
      [&](std::size_t i) {
        std::vector<double> phase = base;
        apply_dither(phase, DitherDrive{dither_frequency_hz, amplitudes[i], true}, fs);
        const auto fi = fringe_intensity(path, a.optics, a.lo_power_w, phase, fs, a.modecleaner_linewidth_hz);
        const auto t = fringe_spectrum(fi, inner, ScatterChannel::differential, shot, seed);
        out[i] = {amplitudes[i], t.band_power(2.0 * t.rbw() - 1e-12, band_hi_hz)};
      },
      a.workers);
  return out;
}

}  // namespace bhd
