#pragma once

#include <cmath>
#include <limits>

namespace bhd {

inline constexpr double kPlanck = 6.62607015e-34;        // J s
inline constexpr double kSpeedOfLight = 299792458.0;     // m/s
inline constexpr double kElectronCharge = 1.602176634e-19;  // C
inline constexpr double kWavelength = 1064e-9;           // m, Nd:YAG
inline constexpr double kPi = 3.14159265358979323846;

inline constexpr double kPhotonEnergy = kPlanck * kSpeedOfLight / kWavelength;  // J

/// Ideal (unit quantum efficiency) responsivity at 1064 nm, A/W.
inline constexpr double kIdealResponsivity = kElectronCharge / kPhotonEnergy;

/// One-sided PSD of a vacuum quadrature fluctuation in photon-flux units.
/// Chosen so that a detected flux N has shot-noise PSD 2N, i.e. 2eI in amperes.
inline constexpr double kVacuumQuadraturePsd = 2.0;

inline double to_db(double ratio) { return 10.0 * std::log10(ratio); }
inline double from_db(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace bhd
