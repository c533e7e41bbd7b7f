#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bhd/noise_psd.hpp"

namespace bhd {

/// Quantum efficiency sampled on a rectangular grid centred on the origin,
/// bilinear between nodes, zero outside the grid.
class PhotodiodeMap {
 public:
  PhotodiodeMap(std::size_t rows, std::size_t cols, double pitch_m, std::vector<double> values);

  static PhotodiodeMap uniform(std::size_t rows, std::size_t cols, double pitch_m, double eta);
  /// eta0 * (1 + gamma_x x + gamma_y y)
  static PhotodiodeMap gradient(std::size_t rows, std::size_t cols, double pitch_m, double eta0, double gamma_x,
                                double gamma_y = 0.0);
  /// Nominal efficiency with Gaussian-smoothed white ripple; rms is relative.
  static PhotodiodeMap synthetic(std::size_t rows, std::size_t cols, double pitch_m, double nominal, double rms,
                                 double correlation_length_m, std::uint64_t seed);
  /// Text grid: "rows cols pitch_m" then rows*cols values, row-major.
  static PhotodiodeMap load(std::istream& is);
  static PhotodiodeMap load(const std::string& path);

  /// Zero every node inside the disc.
  PhotodiodeMap with_dead_spot(double x_m, double y_m, double radius_m) const;

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double pitch_m() const noexcept { return pitch_; }
  double node_x(std::size_t c) const noexcept;
  double node_y(std::size_t r) const noexcept;
  double at(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }
  double nominal() const noexcept { return nominal_; }

  /// Bilinear efficiency at a point.
  double eta(double x_m, double y_m) const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  double pitch_;
  std::vector<double> values_;
  double nominal_;
};

/// Gaussian spot, intensity proportional to exp(-2 r^2 / w^2).
struct BeamProfile {
  double waist_m = 0.0;
  double x0_m = 0.0;
  double y0_m = 0.0;
  double power_w = 0.0;

  void validate() const;
};

/// Fraction of beam power falling on the mapped area.
double overlap(const PhotodiodeMap& map, const BeamProfile& beam);

/// Power-weighted mean efficiency over the beam. Throws ClippingError when
/// less than 99 % of the beam lands on the map.
double response(const PhotodiodeMap& map, const BeamProfile& beam);

struct PointingGradient {
  double d_dx = 0.0;  // 1/m
  double d_dy = 0.0;
};

/// Central difference of response with step waist / 100.
PointingGradient pointing_coefficient(const PhotodiodeMap& map, const BeamProfile& beam);

struct JitterProcess {
  NoisePsd displacement_x;  // m^2/Hz
  NoisePsd displacement_y;
  double mode_shape_amplitude = 0.0;  // fractional waist fluctuation rms, optional
};

struct ModecleanerCavity {
  double linewidth_hz = 4.7e6;
  double hom_suppression = 1.0;  // power; 1 means no cavity, infinity means perfect
  double conversion_per_m = 50.0;  // relative intensity per metre of rejected displacement
};

struct ModecleanerOutput {
  JitterProcess residual;
  NoisePsd converted_x;  // m^2/Hz of displacement rejected into intensity noise
  NoisePsd converted_y;
  NoisePsd relative_intensity;  // 1/Hz, common to both homodyne arms
};

ModecleanerOutput modecleaner_filter(const JitterProcess& jitter, const ModecleanerCavity& cavity);

}  // namespace bhd
