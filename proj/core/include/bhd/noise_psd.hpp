#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace bhd {

class NoisePsd;

struct WhitePsd {
  double level = 0.0;
};

/// level * (reference_hz / f)^exponent
struct PowerLawPsd {
  double level = 0.0;
  double reference_hz = 1.0;
  double exponent = 1.0;
};

/// Laser intensity-noise shape: flat plateau below `corner_hz`, first-order
/// decay above it.  plateau / (1 + (f / corner)^2)
struct RinPsd {
  double plateau = 0.0;
  double corner_hz = 1000.0;
};

/// level * (corner/f)^low_exponent below the corner, level * (corner/f)^high_exponent above.
struct BrokenPowerLawPsd {
  double level = 0.0;
  double corner_hz = 1.0;
  double low_exponent = 2.0;
  double high_exponent = 0.0;
};

/// offset + sum_i a_i / (b_i + (f / scale_hz)^2). Individual a_i may be
/// negative (squeezed spectra) as long as the total stays non-negative.
struct LorentzianSumPsd {
  double offset = 0.0;
  double scale_hz = 1.0;
  std::vector<std::pair<double, double>> terms;  // (a_i, b_i)
};

/// Weighted sum of models, each optionally passed through a single-pole
/// power low-pass 1 / (1 + (f / pole)^2). pole <= 0 means no filter.
struct CompositePsd {
  struct Part {
    double weight = 1.0;
    double lowpass_hz = 0.0;
  };
  std::vector<Part> parts;
  std::vector<NoisePsd> models;
};

/// One-sided power spectral density model of a stationary source.
class NoisePsd {
 public:
  enum class Kind { white, one_over_f, rin_model, broken_power_law, lorentzian, composite };

  NoisePsd() : model_(WhitePsd{0.0}) {}

  static NoisePsd zero() { return white(0.0); }
  static NoisePsd white(double level);
  static NoisePsd one_over_f(double level_at_reference, double reference_hz, double exponent = 1.0);
  static NoisePsd rin(double plateau, double corner_hz = 1000.0);
  /// RIN shape scaled so that psd(anchor_hz) == value_at_anchor exactly.
  static NoisePsd rin_anchored(double value_at_anchor, double anchor_hz, double corner_hz = 1000.0);
  static NoisePsd broken_power_law(double level, double corner_hz, double low_exponent, double high_exponent);
  static NoisePsd lorentzian_sum(double offset, double scale_hz, std::vector<std::pair<double, double>> terms);
  static NoisePsd sum(std::vector<NoisePsd> models);

  NoisePsd scaled(double weight) const;
  NoisePsd lowpassed(double pole_hz) const;

  /// Evaluate at f > 0; throws DomainError for f <= 0.
  double operator()(double f_hz) const;

  Kind kind() const noexcept;
  bool is_zero() const noexcept;
  std::string describe() const;

 private:
  using Model = std::variant<WhitePsd, PowerLawPsd, RinPsd, BrokenPowerLawPsd, LorentzianSumPsd, CompositePsd>;
  explicit NoisePsd(Model m) : model_(std::move(m)) {}
  double eval(double f_hz) const;
  Model model_;
};

/// Integral of the PSD over [f1, f2] (0 < f1 < f2), by log-spaced Simpson rule.
double band_variance(const NoisePsd& psd, double f1_hz, double f2_hz, std::size_t points_per_decade = 400);

}  // namespace bhd
