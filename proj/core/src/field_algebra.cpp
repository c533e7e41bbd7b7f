#include "bhd/field_algebra.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "bhd/constants.hpp"
#include "bhd/errors.hpp"

namespace bhd {

LocalOscillator LocalOscillator::from_power(double power_w) {
  if (!(power_w >= 0.0) || !std::isfinite(power_w)) throw DomainError("LO power must be >= 0");
  return {power_w, std::sqrt(power_w / kPhotonEnergy)};
}

LocalOscillator LocalOscillator::from_alpha(double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw DomainError("LO amplitude must be >= 0");
  return {alpha * alpha * kPhotonEnergy, alpha};
}

void HomodyneOptics::validate() const {
  auto open01 = [](double v) { return v > 0.0 && v < 1.0; };
  if (!open01(eta_bs)) throw DomainError("eta_bs must be in (0,1), got " + std::to_string(eta_bs));
  if (!(eta_l >= 0.0 && eta_l <= 1.0)) throw DomainError("eta_l must be in [0,1], got " + std::to_string(eta_l));
  if (!(eta_pd1 > 0.0 && eta_pd1 <= 1.0)) throw DomainError("eta_pd1 must be in (0,1], got " + std::to_string(eta_pd1));
  if (!(eta_pd2 > 0.0 && eta_pd2 <= 1.0)) throw DomainError("eta_pd2 must be in (0,1], got " + std::to_string(eta_pd2));
}

Topology parse_topology(std::string_view name) {
  if (name == "variable_gain") return Topology::variable_gain;
  if (name == "current_subtracting") return Topology::current_subtracting;
  throw DomainError("unknown topology '" + std::string(name) + "' (variable_gain, current_subtracting)");
}

std::string_view to_string(Topology t) {
  return t == Topology::variable_gain ? "variable_gain" : "current_subtracting";
}

std::string_view to_string(Port p) {
  switch (p) {
    case Port::lo: return "lo";
    case Port::signal: return "signal";
    case Port::v0: return "v0";
    case Port::v1: return "v1";
    case Port::v2: return "v2";
  }
  return "?";
}

Port parse_port(std::string_view name) {
  for (Port p : kAllPorts) {
    if (to_string(p) == name) return p;
  }
  if (name == "lo_intensity") return Port::lo;
  throw UnmappedSourceError("unknown port '" + std::string(name) + "'");
}

double DiodeCoefficients::operator[](Port p) const noexcept {
  switch (p) {
    case Port::lo: return c_lo;
    case Port::signal: return c_sig;
    case Port::v0: return c_v0;
    case Port::v1: return c_v1;
    case Port::v2: return c_v2;
  }
  return 0.0;
}

double DiodeCoefficients::sum_squares() const noexcept {
  return c_lo * c_lo + c_sig * c_sig + c_v0 * c_v0 + c_v1 * c_v1 + c_v2 * c_v2;
}

CouplingCoefficients derive_coefficients(const LocalOscillator& lo, const HomodyneOptics& o) {
  o.validate();
  const double a = lo.amplitude_alpha;

  // Amplitude transfer of each input mode onto the two detected fields.
  //   F1 = sqrt(eta1) [ sqrt(1-l)(sqrt(bs) A + sqrt(1-bs) B) + sqrt(l) V0 ] + sqrt(1-eta1) V1
  //   F2 = sqrt(eta2) [ sqrt(1-bs) A - sqrt(bs) B ] + sqrt(1-eta2) V2
  // Linearizing |F|^2 about the mean field mu gives mu * t_p for each port p.
  const double s1 = std::sqrt(o.eta_pd1);
  const double s2 = std::sqrt(o.eta_pd2);
  const double t1_lo = s1 * std::sqrt(1.0 - o.eta_l) * std::sqrt(o.eta_bs);
  const double t1_sig = s1 * std::sqrt(1.0 - o.eta_l) * std::sqrt(1.0 - o.eta_bs);
  const double t1_v0 = s1 * std::sqrt(o.eta_l);
  const double t1_v1 = std::sqrt(1.0 - o.eta_pd1);
  const double t2_lo = s2 * std::sqrt(1.0 - o.eta_bs);
  const double t2_sig = -s2 * std::sqrt(o.eta_bs);
  const double t2_v2 = std::sqrt(1.0 - o.eta_pd2);

  const double mu1 = a * t1_lo;
  const double mu2 = a * t2_lo;

  CouplingCoefficients c;
  c.alpha = a;
  c.diode1 = {mu1 * mu1, mu1 * t1_lo, mu1 * t1_sig, mu1 * t1_v0, mu1 * t1_v1, 0.0};
  c.diode2 = {mu2 * mu2, mu2 * t2_lo, mu2 * t2_sig, 0.0, 0.0, mu2 * t2_v2};
  // Same values, but written as plain products so that a balance computed
  // from the efficiencies cancels to the last bit.
  const double k1 = o.eta_pd1 * (1.0 - o.eta_l) * o.eta_bs;
  const double k2 = o.eta_pd2 * (1.0 - o.eta_bs);
  c.diode1.c_lo = a * k1;
  c.diode1.dc = a * a * k1;
  c.diode2.c_lo = a * k2;
  c.diode2.dc = a * a * k2;
  return c;
}

namespace {

// Residuals at the level of rounding error count as a perfect null.
constexpr double kNullTolerance = 16.0 * std::numeric_limits<double>::epsilon();

double cmrr_from(double ref, double res) {
  if (ref == 0.0) throw DomainError("cmrr_db: single-diode LO coefficient is zero");
  if (res <= kNullTolerance * ref) return kPerfectCmrr;
  return 20.0 * std::log10(ref / res);
}

DiodeCoefficients scale(const DiodeCoefficients& d, double g) {
  return {g * d.dc, g * d.c_lo, g * d.c_sig, g * d.c_v0, g * d.c_v1, g * d.c_v2};
}

}  // namespace

DifferentialCoefficients subtract_output(const CouplingCoefficients& coeffs, double g1, double g2,
                                         Topology topology) {
  if (!(g1 > 0.0) || !(g2 > 0.0)) throw DomainError("gains must be > 0");
  if (topology == Topology::current_subtracting && g1 != g2) {
    throw DomainError("current_subtracting topology has a single gain; g1 must equal g2");
  }
  DifferentialCoefficients d;
  d.topology = topology;
  d.g1 = g1;
  d.g2 = g2;
  d.diode1_scaled = scale(coeffs.diode1, g1);
  d.diode2_scaled = scale(coeffs.diode2, g2);
  const auto& x = d.diode1_scaled;
  const auto& y = d.diode2_scaled;
  d.diff = {x.dc - y.dc, x.c_lo - y.c_lo, x.c_sig - y.c_sig, x.c_v0 - y.c_v0, x.c_v1 - y.c_v1, x.c_v2 - y.c_v2};
  return d;
}

double cmrr_db(const DifferentialCoefficients& diff) {
  const double ref = std::max(std::abs(diff.diode1_scaled.c_lo), std::abs(diff.diode2_scaled.c_lo));
  return cmrr_from(ref, std::abs(diff.diff.c_lo));
}

double cmrr_db(const DifferentialCoefficients& diff, const CouplingCoefficients& single_diode_ref) {
  const double ref = std::max(std::abs(diff.g1 * single_diode_ref.diode1.c_lo),
                              std::abs(diff.g2 * single_diode_ref.diode2.c_lo));
  return cmrr_from(ref, std::abs(diff.diff.c_lo));
}

HomodyneOptics with_split(HomodyneOptics optics, double eta_bs) {
  optics.eta_bs = eta_bs;
  return optics;
}

BalanceSetting balance_for_cmrr(const HomodyneOptics& optics, Topology topology, double g1, double target_db) {
  optics.validate();
  if (!(g1 > 0.0)) throw DomainError("g1 must be > 0");
  if (!(target_db > 0.0)) throw DomainError("target CMRR must be > 0 dB");
  const double r = std::isinf(target_db) ? 0.0 : std::pow(10.0, -target_db / 20.0);
  const double arm1 = optics.eta_pd1 * (1.0 - optics.eta_l);
  BalanceSetting s;
  s.g1 = g1;
  if (topology == Topology::variable_gain) {
    const double a = arm1 * optics.eta_bs;
    const double b = optics.eta_pd2 * (1.0 - optics.eta_bs);
    s.g2 = g1 * a * (1.0 - r) / b;
    s.eta_bs = optics.eta_bs;
    if (!(s.g2 > 0.0) || !std::isfinite(s.g2)) throw InfeasibleError("no positive g2 balances the detector");
    return s;
  }
  s.g2 = g1;
  s.eta_bs = optics.eta_pd2 / (arm1 * (1.0 - r) + optics.eta_pd2);
  if (!(s.eta_bs > 0.0 && s.eta_bs < 1.0)) {
    throw InfeasibleError("balancing requires eta_bs = " + std::to_string(s.eta_bs) + ", outside (0,1)");
  }
  return s;
}

BalanceSetting optimize_balance(const HomodyneOptics& optics, Topology topology, double g1) {
  return balance_for_cmrr(optics, topology, g1, kPerfectCmrr);
}

}  // namespace bhd
