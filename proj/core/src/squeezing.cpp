#include "bhd/squeezing.hpp"

#include <cmath>
#include <string>

#include "bhd/constants.hpp"
#include "bhd/errors.hpp"

namespace bhd {

void OpoParams::validate() const {
  if (!(pump_ratio >= 0.0 && pump_ratio < 1.0)) {
    throw DomainError("opo pump_ratio must be in [0,1), got " + std::to_string(pump_ratio));
  }
  if (!(cavity_linewidth_hz > 0.0)) throw DomainError("opo cavity_linewidth_hz must be > 0");
  if (!(phase_noise_rms_rad >= 0.0)) throw DomainError("opo phase_noise_rms_rad must be >= 0");
}

void EfficiencyChain::validate() const {
  auto check = [](double v, const char* name) {
    if (!(v > 0.0 && v <= 1.0)) throw DomainError(std::string(name) + " must be in (0,1]");
  };
  check(escape, "escape");
  check(propagation, "propagation");
  check(visibility, "visibility");
  check(quantum_efficiency, "quantum_efficiency");
}

double total_efficiency(const EfficiencyChain& c) {
  c.validate();
  return c.escape * c.propagation * c.visibility * c.visibility * c.quantum_efficiency;
}

double squeezed_weight(double angle, double rms) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const double cr = std::cos(rms);
  const double sr = std::sin(rms);
  return c * c * cr * cr + s * s * sr * sr;
}

namespace {

void check_eta(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("eta_tot must be in [0,1]");
}

}  // namespace

QuadratureVariances opo_variances(const OpoParams& opo, double eta, double f_hz) {
  opo.validate();
  check_eta(eta);
  const double x = std::sqrt(opo.pump_ratio);
  const double w = f_hz / (opo.cavity_linewidth_hz / 2.0);
  const double minus = 1.0 - eta * 4.0 * x / ((1.0 + x) * (1.0 + x) + w * w);
  const double plus = 1.0 + eta * 4.0 * x / ((1.0 - x) * (1.0 - x) + w * w);
  const double c = squeezed_weight(0.0, opo.phase_noise_rms_rad);
  return {c * minus + (1.0 - c) * plus, (1.0 - c) * minus + c * plus};
}

NoisePsd squeezed_signal_psd(const OpoParams& opo, double eta, double angle) {
  opo.validate();
  check_eta(eta);
  if (!(angle >= 0.0 && angle < kPi)) throw DomainError("quadrature angle must be in [0, pi)");
  const double x = std::sqrt(opo.pump_ratio);
  const double c = squeezed_weight(angle, opo.phase_noise_rms_rad);
  const double k = eta * 4.0 * x;
  return NoisePsd::lorentzian_sum(1.0, opo.cavity_linewidth_hz / 2.0,
                                  {{-c * k, (1.0 + x) * (1.0 + x)}, {(1.0 - c) * k, (1.0 - x) * (1.0 - x)}});
}

NoisePsd squeezed_signal_psd(const OpoParams& opo, const EfficiencyChain& chain, double angle) {
  return squeezed_signal_psd(opo, total_efficiency(chain), angle);
}

}  // namespace bhd
