#include "bhd/noise_psd.hpp"

#include <cmath>
#include <sstream>

#include "bhd/errors.hpp"

namespace bhd {
namespace {

void require_non_negative(double v, const char* what) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError(std::string("NoisePsd: ") + what + " must be finite and >= 0");
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string("NoisePsd: ") + what + " must be finite and > 0");
}

}  // namespace

NoisePsd NoisePsd::white(double level) {
  require_non_negative(level, "white level");
  return NoisePsd(WhitePsd{level});
}

NoisePsd NoisePsd::one_over_f(double level_at_reference, double reference_hz, double exponent) {
  require_non_negative(level_at_reference, "1/f level");
  require_positive(reference_hz, "reference frequency");
  if (!std::isfinite(exponent)) throw DomainError("NoisePsd: exponent must be finite");
  return NoisePsd(PowerLawPsd{level_at_reference, reference_hz, exponent});
}

NoisePsd NoisePsd::rin(double plateau, double corner_hz) {
  require_non_negative(plateau, "RIN plateau");
  require_positive(corner_hz, "RIN corner");
  return NoisePsd(RinPsd{plateau, corner_hz});
}

NoisePsd NoisePsd::rin_anchored(double value_at_anchor, double anchor_hz, double corner_hz) {
  require_positive(anchor_hz, "anchor frequency");
  const double r = anchor_hz / corner_hz;
  return rin(value_at_anchor * (1.0 + r * r), corner_hz);
}

NoisePsd NoisePsd::broken_power_law(double level, double corner_hz, double low_exponent, double high_exponent) {
  require_non_negative(level, "broken power law level");
  require_positive(corner_hz, "corner frequency");
  return NoisePsd(BrokenPowerLawPsd{level, corner_hz, low_exponent, high_exponent});
}

NoisePsd NoisePsd::lorentzian_sum(double offset, double scale_hz, std::vector<std::pair<double, double>> terms) {
  require_positive(scale_hz, "Lorentzian scale");
  for (const auto& [a, b] : terms) {
    if (!std::isfinite(a) || !(b >= 0.0)) throw DomainError("NoisePsd: Lorentzian term needs finite a and b >= 0");
  }
  return NoisePsd(LorentzianSumPsd{offset, scale_hz, std::move(terms)});
}

NoisePsd NoisePsd::sum(std::vector<NoisePsd> models) {
  CompositePsd c;
  c.parts.assign(models.size(), CompositePsd::Part{});
  c.models = std::move(models);
  return NoisePsd(std::move(c));
}

NoisePsd NoisePsd::scaled(double weight) const {
  require_non_negative(weight, "scale weight");
  CompositePsd c;
  c.parts.push_back({weight, 0.0});
  c.models.push_back(*this);
  return NoisePsd(std::move(c));
}

NoisePsd NoisePsd::lowpassed(double pole_hz) const {
  require_positive(pole_hz, "low-pass pole");
  CompositePsd c;
  c.parts.push_back({1.0, pole_hz});
  c.models.push_back(*this);
  return NoisePsd(std::move(c));
}

double NoisePsd::operator()(double f_hz) const {
  if (!(f_hz > 0.0)) throw DomainError("NoisePsd: frequency must be > 0");
  return eval(f_hz);
}

double NoisePsd::eval(double f) const {
  struct Visitor {
    double f;
    double operator()(const WhitePsd& m) const { return m.level; }
    double operator()(const PowerLawPsd& m) const { return m.level * std::pow(m.reference_hz / f, m.exponent); }
    double operator()(const RinPsd& m) const {
      const double r = f / m.corner_hz;
      return m.plateau / (1.0 + r * r);
    }
    double operator()(const BrokenPowerLawPsd& m) const {
      const double e = f < m.corner_hz ? m.low_exponent : m.high_exponent;
      return m.level * std::pow(m.corner_hz / f, e);
    }
    double operator()(const LorentzianSumPsd& m) const {
      const double x = f / m.scale_hz;
      double v = m.offset;
      for (const auto& [a, b] : m.terms) v += a / (b + x * x);
      if (v < 0.0) {
        // Round-off on a nearly perfectly squeezed spectrum.
        if (v > -1e-12) return 0.0;
        throw DomainError("NoisePsd: Lorentzian sum evaluated negative");
      }
      return v;
    }
    double operator()(const CompositePsd& m) const {
      double v = 0.0;
      for (std::size_t i = 0; i < m.models.size(); ++i) {
        double part = m.parts[i].weight * m.models[i].eval(f);
        if (m.parts[i].lowpass_hz > 0.0) {
          const double r = f / m.parts[i].lowpass_hz;
          part /= 1.0 + r * r;
        }
        v += part;
      }
      return v;
    }
  };
  return std::visit(Visitor{f}, model_);
}

NoisePsd::Kind NoisePsd::kind() const noexcept {
  switch (model_.index()) {
    case 0: return Kind::white;
    case 1: return Kind::one_over_f;
    case 2: return Kind::rin_model;
    case 3: return Kind::broken_power_law;
    case 4: return Kind::lorentzian;
    default: return Kind::composite;
  }
}

bool NoisePsd::is_zero() const noexcept {
  if (const auto* w = std::get_if<WhitePsd>(&model_)) return w->level == 0.0;
  if (const auto* p = std::get_if<PowerLawPsd>(&model_)) return p->level == 0.0;
  if (const auto* r = std::get_if<RinPsd>(&model_)) return r->plateau == 0.0;
  if (const auto* b = std::get_if<BrokenPowerLawPsd>(&model_)) return b->level == 0.0;
  if (const auto* c = std::get_if<CompositePsd>(&model_)) {
    for (std::size_t i = 0; i < c->models.size(); ++i) {
      if (c->parts[i].weight != 0.0 && !c->models[i].is_zero()) return false;
    }
    return true;
  }
  return false;
}

std::string NoisePsd::describe() const {
  std::ostringstream os;
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, WhitePsd>) {
          os << "white(" << m.level << ")";
        } else if constexpr (std::is_same_v<T, PowerLawPsd>) {
          os << "power_law(" << m.level << " @ " << m.reference_hz << " Hz, exp " << m.exponent << ")";
        } else if constexpr (std::is_same_v<T, RinPsd>) {
          os << "rin(" << m.plateau << ", corner " << m.corner_hz << " Hz)";
        } else if constexpr (std::is_same_v<T, BrokenPowerLawPsd>) {
          os << "broken_power_law(" << m.level << " @ " << m.corner_hz << " Hz, " << m.low_exponent << "/"
             << m.high_exponent << ")";
        } else if constexpr (std::is_same_v<T, LorentzianSumPsd>) {
          os << "lorentzian(" << m.terms.size() << " terms)";
        } else {
          os << "composite(" << m.models.size() << " parts)";
        }
      },
      model_);
  return os.str();
}

double band_variance(const NoisePsd& psd, double f1_hz, double f2_hz, std::size_t points_per_decade) {
  if (!(f1_hz > 0.0) || !(f2_hz > f1_hz)) throw DomainError("band_variance: need 0 < f1 < f2");
  // Integrate f*S(f) over ln f.
  const double u1 = std::log(f1_hz);
  const double u2 = std::log(f2_hz);
  const double decades = (u2 - u1) / std::log(10.0);
  std::size_t n = static_cast<std::size_t>(std::ceil(decades * static_cast<double>(points_per_decade)));
  n = std::max<std::size_t>(n + (n % 2), 2);
  const double h = (u2 - u1) / static_cast<double>(n);
  double acc = 0.0;
  for (std::size_t i = 0; i <= n; ++i) {
    const double u = u1 + h * static_cast<double>(i);
    const double f = std::exp(u);
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += w * f * psd(f);
  }
  return acc * h / 3.0;
}

}  // namespace bhd
