#include "bhd/pointing.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "bhd/constants.hpp"
#include "bhd/errors.hpp"
#include "bhd/random.hpp"

namespace bhd {

PhotodiodeMap::PhotodiodeMap(std::size_t rows, std::size_t cols, double pitch_m, std::vector<double> values)
    : rows_(rows), cols_(cols), pitch_(pitch_m), values_(std::move(values)) {
  if (rows_ < 2 || cols_ < 2) throw DomainError("PhotodiodeMap: need at least 2x2 nodes");
  if (!(pitch_ > 0.0)) throw DomainError("PhotodiodeMap: pitch must be > 0");
  if (values_.size() != rows_ * cols_) throw DomainError("PhotodiodeMap: value count does not match rows*cols");
  double acc = 0.0;
  for (double v : values_) {
    if (!(v >= 0.0 && v <= 1.0)) throw DomainError("PhotodiodeMap: efficiencies must lie in [0,1]");
    acc += v;
  }
  nominal_ = acc / static_cast<double>(values_.size());
}

PhotodiodeMap PhotodiodeMap::uniform(std::size_t rows, std::size_t cols, double pitch_m, double eta) {
  return PhotodiodeMap(rows, cols, pitch_m, std::vector<double>(rows * cols, eta));
}

double PhotodiodeMap::node_x(std::size_t c) const noexcept {
  return (static_cast<double>(c) - static_cast<double>(cols_ - 1) / 2.0) * pitch_;
}

double PhotodiodeMap::node_y(std::size_t r) const noexcept {
  return (static_cast<double>(r) - static_cast<double>(rows_ - 1) / 2.0) * pitch_;
}

PhotodiodeMap PhotodiodeMap::gradient(std::size_t rows, std::size_t cols, double pitch_m, double eta0,
                                      double gamma_x, double gamma_y) {
  PhotodiodeMap m = uniform(rows, cols, pitch_m, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      m.values_[r * cols + c] = eta0 * (1.0 + gamma_x * m.node_x(c) + gamma_y * m.node_y(r));
    }
  }
  return PhotodiodeMap(rows, cols, pitch_m, std::move(m.values_));
}

PhotodiodeMap PhotodiodeMap::synthetic(std::size_t rows, std::size_t cols, double pitch_m, double nominal,
                                       double rms, double correlation_length_m, std::uint64_t seed) {
  if (!(correlation_length_m > 0.0)) throw DomainError("synthetic map: correlation length must be > 0");
  std::vector<double> z = gaussian_samples(rows * cols, 1.0, seed);

  // Separable Gaussian smoothing with periodic wrap, kernel sigma = correlation length.
  const double s = correlation_length_m / pitch_m;
  const int half = static_cast<int>(std::ceil(4.0 * s));
  std::vector<double> kern(2 * half + 1);
  for (int i = -half; i <= half; ++i) kern[i + half] = std::exp(-0.5 * (i / s) * (i / s));
  std::vector<double> tmp(z.size(), 0.0);
  const auto R = static_cast<long>(rows);
  const auto C = static_cast<long>(cols);
  for (long r = 0; r < R; ++r) {
    for (long c = 0; c < C; ++c) {
      double acc = 0.0;
      for (int i = -half; i <= half; ++i) acc += kern[i + half] * z[r * C + ((c + i) % C + C) % C];
      tmp[r * C + c] = acc;
    }
  }
  for (long r = 0; r < R; ++r) {
    for (long c = 0; c < C; ++c) {
      double acc = 0.0;
      for (int i = -half; i <= half; ++i) acc += kern[i + half] * tmp[((r + i) % R + R) % R * C + c];
      z[r * C + c] = acc;
    }
  }

  double mean = 0.0;
  for (double v : z) mean += v;
  mean /= static_cast<double>(z.size());
  double var = 0.0;
  for (double v : z) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / static_cast<double>(z.size()));
  for (double& v : z) v = std::clamp(nominal * (1.0 + rms * (v - mean) / sd), 0.0, 1.0);
  return PhotodiodeMap(rows, cols, pitch_m, std::move(z));
}

PhotodiodeMap PhotodiodeMap::load(std::istream& is) {
  std::size_t rows = 0;
  std::size_t cols = 0;
  double pitch = 0.0;
  if (!(is >> rows >> cols >> pitch)) throw DomainError("map file: expected header 'rows cols pitch_m'");
  std::vector<double> v(rows * cols);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(is >> v[i])) throw DomainError("map file: expected " + std::to_string(v.size()) + " values, got " +
                                         std::to_string(i));
  }
  return PhotodiodeMap(rows, cols, pitch, std::move(v));
}

PhotodiodeMap PhotodiodeMap::load(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DomainError("cannot open map file " + path);
  return load(is);
}

PhotodiodeMap PhotodiodeMap::with_dead_spot(double x_m, double y_m, double radius_m) const {
  std::vector<double> v = values_;
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      const double dx = node_x(c) - x_m;
      const double dy = node_y(r) - y_m;
      if (dx * dx + dy * dy <= radius_m * radius_m) v[r * cols_ + c] = 0.0;
    }
  }
  return PhotodiodeMap(rows_, cols_, pitch_, std::move(v));
}

double PhotodiodeMap::eta(double x, double y) const {
  const double u = x / pitch_ + static_cast<double>(cols_ - 1) / 2.0;
  const double w = y / pitch_ + static_cast<double>(rows_ - 1) / 2.0;
  if (u < 0.0 || w < 0.0 || u > static_cast<double>(cols_ - 1) || w > static_cast<double>(rows_ - 1)) return 0.0;
  const auto c = std::min(static_cast<std::size_t>(u), cols_ - 2);
  const auto r = std::min(static_cast<std::size_t>(w), rows_ - 2);
  const double fx = u - static_cast<double>(c);
  const double fy = w - static_cast<double>(r);
  return (1 - fy) * ((1 - fx) * at(r, c) + fx * at(r, c + 1)) + fy * ((1 - fx) * at(r + 1, c) + fx * at(r + 1, c + 1));
}

void BeamProfile::validate() const {
  if (!(waist_m > 0.0)) throw DomainError("beam waist must be > 0");
  if (!(power_w >= 0.0)) throw DomainError("beam power must be >= 0");
}

namespace {

// Node weights of a 1-D Gaussian (sigma = w/2) against the linear hat
// functions of the grid: weight[i] = integral of g(x) * hat_i(x).
struct AxisWeights {
  std::vector<double> w;
  double mass = 0.0;
};

AxisWeights axis_weights(std::size_t n, double pitch, double origin, double centre, double sigma) {
  // Standardized cumulative and first moment of the normal density.
  const double s2 = std::sqrt(2.0);
  auto Phi = [&](double x) { return 0.5 * std::erfc(-(x - centre) / (sigma * s2)); };
  auto M1 = [&](double x) {  // integral of (t - centre) g(t) dt from -inf to x
    const double z = (x - centre) / sigma;
    return -sigma * std::exp(-0.5 * z * z) / std::sqrt(2.0 * kPi);
  };
  AxisWeights a;
  a.w.assign(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double x0 = origin + pitch * static_cast<double>(i);
    const double x1 = x0 + pitch;
    const double m0 = Phi(x1) - Phi(x0);
    const double m1 = (M1(x1) - M1(x0)) + centre * m0;  // integral of t g(t)
    a.w[i] += (x1 * m0 - m1) / pitch;
    a.w[i + 1] += (m1 - x0 * m0) / pitch;
    a.mass += m0;
  }
  return a;
}

struct Weights {
  AxisWeights x;
  AxisWeights y;
};

Weights beam_weights(const PhotodiodeMap& map, const BeamProfile& beam) {
  beam.validate();
  const double sigma = beam.waist_m / 2.0;
  return {axis_weights(map.cols(), map.pitch_m(), map.node_x(0), beam.x0_m, sigma),
          axis_weights(map.rows(), map.pitch_m(), map.node_y(0), beam.y0_m, sigma)};
}

double weighted(const PhotodiodeMap& map, const Weights& w) {
  double acc = 0.0;
  for (std::size_t r = 0; r < map.rows(); ++r) {
    if (w.y.w[r] == 0.0) continue;
    double row = 0.0;
    for (std::size_t c = 0; c < map.cols(); ++c) row += map.at(r, c) * w.x.w[c];
    acc += w.y.w[r] * row;
  }
  return acc;
}

}  // namespace

double overlap(const PhotodiodeMap& map, const BeamProfile& beam) {
  const Weights w = beam_weights(map, beam);
  return w.x.mass * w.y.mass;
}

double response(const PhotodiodeMap& map, const BeamProfile& beam) {
  const Weights w = beam_weights(map, beam);
  const double ov = w.x.mass * w.y.mass;
  if (ov < 0.99) {
    std::ostringstream os;
    os << "beam clipped: only " << ov * 100.0 << " % of the power lands on the photodiode (need 99 %)";
    throw ClippingError(os.str());
  }
  return weighted(map, w);
}

PointingGradient pointing_coefficient(const PhotodiodeMap& map, const BeamProfile& beam) {
  const double h = beam.waist_m / 100.0;
  auto at = [&](double dx, double dy) {
    BeamProfile b = beam;
    b.x0_m += dx;
    b.y0_m += dy;
    return response(map, b);
  };
  response(map, beam);
  return {(at(h, 0) - at(-h, 0)) / (2 * h), (at(0, h) - at(0, -h)) / (2 * h)};
}

ModecleanerOutput modecleaner_filter(const JitterProcess& jitter, const ModecleanerCavity& cavity) {
  if (!(cavity.linewidth_hz > 0.0)) throw DomainError("modecleaner linewidth must be > 0");
  if (!(cavity.hom_suppression >= 1.0)) throw DomainError("hom_suppression must be >= 1");
  ModecleanerOutput out;
  out.residual.mode_shape_amplitude = jitter.mode_shape_amplitude;
  if (cavity.hom_suppression == 1.0) {
    // No cavity in the beam.
    out.residual = jitter;
    out.converted_x = out.converted_y = out.relative_intensity = NoisePsd::zero();
    return out;
  }
  const double pole = cavity.linewidth_hz / 2.0;
  const double pass = std::isinf(cavity.hom_suppression) ? 0.0 : 1.0 / cavity.hom_suppression;
  out.residual.displacement_x = jitter.displacement_x.scaled(pass).lowpassed(pole);
  out.residual.displacement_y = jitter.displacement_y.scaled(pass).lowpassed(pole);
  out.converted_x = jitter.displacement_x.scaled(1.0 - pass).lowpassed(pole);
  out.converted_y = jitter.displacement_y.scaled(1.0 - pass).lowpassed(pole);
  const double k2 = cavity.conversion_per_m * cavity.conversion_per_m;
  out.relative_intensity = NoisePsd::sum({out.converted_x, out.converted_y}).scaled(k2);
  return out;
}

}  // namespace bhd
