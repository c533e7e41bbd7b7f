#pragma once

#include <array>
#include <limits>
#include <string_view>

namespace bhd {

struct OpoParams;

struct LocalOscillator {
  double power_w = 0.0;
  double amplitude_alpha = 0.0;  // sqrt(photons/s)

  static LocalOscillator from_power(double power_w);
  static LocalOscillator from_alpha(double alpha);
  double flux() const noexcept { return amplitude_alpha * amplitude_alpha; }
};

enum class SignalKind { vacuum, squeezed };

/// Field entering the signal port. Never carries a coherent amplitude.
struct SignalField {
  SignalKind kind = SignalKind::vacuum;
  const OpoParams* squeeze_params = nullptr;
};

struct HomodyneOptics {
  double eta_bs = 0.5;   // power fraction of the LO sent to diode 1
  double eta_l = 0.0;    // loss in arm 1
  double eta_pd1 = 1.0;
  double eta_pd2 = 1.0;

  void validate() const;
};

enum class Topology { variable_gain, current_subtracting };
Topology parse_topology(std::string_view name);
std::string_view to_string(Topology t);

/// Noise entry points of the two-diode model. v0 is the vacuum leaking in
/// through the arm-1 loss; v1 and v2 through the diode inefficiencies.
enum class Port { lo, signal, v0, v1, v2 };
inline constexpr std::array<Port, 5> kAllPorts{Port::lo, Port::signal, Port::v0, Port::v1, Port::v2};
std::string_view to_string(Port p);
Port parse_port(std::string_view name);

/// Linearized photocurrent of one diode: i = dc + sum_p c_p dX_p, in photon
/// flux units. Coefficients multiply amplitude-quadrature fluctuations.
struct DiodeCoefficients {
  double dc = 0.0;
  double c_lo = 0.0;
  double c_sig = 0.0;
  double c_v0 = 0.0;
  double c_v1 = 0.0;
  double c_v2 = 0.0;

  double operator[](Port p) const noexcept;
  double sum_squares() const noexcept;
};

struct CouplingCoefficients {
  double alpha = 0.0;
  DiodeCoefficients diode1;
  DiodeCoefficients diode2;
};

/// g1 * diode1 - g2 * diode2. Units follow the gains (1 for bare photocurrent).
struct DifferentialCoefficients {
  Topology topology = Topology::variable_gain;
  double g1 = 1.0;
  double g2 = 1.0;
  DiodeCoefficients diff;
  DiodeCoefficients diode1_scaled;  // g1 * diode1
  DiodeCoefficients diode2_scaled;  // g2 * diode2

  double operator[](Port p) const noexcept { return diff[p]; }
};

CouplingCoefficients derive_coefficients(const LocalOscillator& lo, const HomodyneOptics& optics);

DifferentialCoefficients subtract_output(const CouplingCoefficients& coeffs, double g1, double g2,
                                         Topology topology);

/// Returned by cmrr_db when the differential LO coefficient vanishes.
inline constexpr double kPerfectCmrr = std::numeric_limits<double>::infinity();

/// 20 log10 of the larger single-diode LO response over the differential residual.
double cmrr_db(const DifferentialCoefficients& diff);
double cmrr_db(const DifferentialCoefficients& diff, const CouplingCoefficients& single_diode_ref);

struct BalanceSetting {
  double g1 = 1.0;
  double g2 = 1.0;
  double eta_bs = 0.5;
};

/// Null the differential LO coefficient: variable_gain adjusts g2 (g1 kept),
/// current_subtracting adjusts eta_bs. Throws InfeasibleError if eta_bs would
/// leave (0, 1).
BalanceSetting optimize_balance(const HomodyneOptics& optics, Topology topology, double g1 = 1.0);

/// Detune away from the null so that cmrr_db equals target_db. Infinite target
/// gives the null.
BalanceSetting balance_for_cmrr(const HomodyneOptics& optics, Topology topology, double g1, double target_db);

HomodyneOptics with_split(HomodyneOptics optics, double eta_bs);

}  // namespace bhd
