#include "bhd/budget.hpp"

#include <array>
#include <cmath>
#include <optional>

#include "bhd/constants.hpp"
#include "bhd/errors.hpp"

namespace bhd {
namespace {

struct Resolved {
  std::optional<Port> port;  // empty: additive
  const BudgetSource* src;
};

std::vector<Resolved> resolve(const std::vector<BudgetSource>& sources) {
  std::vector<Resolved> out;
  out.reserve(sources.size());
  for (const auto& s : sources) {
    if (s.port == "additive" || s.port == "electronic") {
      out.push_back({std::nullopt, &s});
      continue;
    }
    try {
      out.push_back({parse_port(s.port), &s});
    } catch (const UnmappedSourceError&) {
      throw UnmappedSourceError("budget source '" + s.name + "' has no coupling port ('" + s.port +
                                "'); use lo, signal, v0, v1, v2 or additive");
    }
  }
  return out;
}

double evaluate(const DifferentialCoefficients& diff, const std::vector<Resolved>& src, double f) {
  std::array<double, 5> base{1.0, 1.0, 1.0, 1.0, 1.0};
  std::array<double, 5> replacement{};
  std::array<bool, 5> replaced{};
  std::array<double, 5> excess{};
  double additive = 0.0;
  for (const auto& r : src) {
    const double v = r.src->psd(f);
    if (!r.port) {
      additive += v;
      continue;
    }
    const auto i = static_cast<std::size_t>(*r.port);
    if (r.src->replaces_vacuum) {
      replacement[i] += v;
      replaced[i] = true;
    } else {
      excess[i] += v;
    }
  }
  std::array<double, 5> s{};
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = (replaced[i] ? replacement[i] : base[i]) + excess[i];
  const double e2 = kElectronCharge * kElectronCharge;
  double q = 0.0;
  for (Port p : kAllPorts) {
    const double c = diff[p];
    q += c * c * s[static_cast<std::size_t>(p)];
  }
  return e2 * kVacuumQuadraturePsd * q + additive;
}

double dirichlet(double u) {
  if (u == 0.0) return 1.0;
  const double x = kPi * u;
  return std::sin(x) / x;
}

constexpr int kKernelHalfWidth = 6;   // bins
constexpr int kKernelSteps = 16;      // per bin

}  // namespace

double hann_kernel(double u) {
  const double w = 0.5 * dirichlet(u) + 0.25 * dirichlet(u - 1.0) + 0.25 * dirichlet(u + 1.0);
  return w * w / 0.375;
}

double budget_psd(const DifferentialCoefficients& diff, const std::vector<BudgetSource>& sources, double f_hz) {
  return evaluate(diff, resolve(sources), f_hz);
}

double quantum_shot_floor(const DifferentialCoefficients& diff) {
  return evaluate(diff, {}, 1.0);
}

SpectrumTrace analytic_budget(const DifferentialCoefficients& diff, const std::vector<BudgetSource>& sources,
                              const BudgetGrid& grid) {
  if (!(grid.span_hz > 0.0) || grid.lines < 2) throw DomainError("analytic_budget: bad grid");
  const auto src = resolve(sources);
  const double rbw = grid.span_hz / static_cast<double>(grid.lines);

  // Midpoint rule over the truncated kernel, renormalized to unit sum.
  const int m = 2 * kKernelHalfWidth * kKernelSteps;
  std::vector<double> u(m);
  std::vector<double> k(m);
  double ksum = 0.0;
  for (int j = 0; j < m; ++j) {
    u[j] = -kKernelHalfWidth + (j + 0.5) / kKernelSteps;
    k[j] = hann_kernel(u[j]);
    ksum += k[j];
  }
  for (double& x : k) x /= ksum;

  SpectrumTrace t;
  t.units = TraceUnits::V2_per_Hz;
  t.raw = true;
  for (std::size_t b = 0; b <= grid.lines; ++b) {
    const double fb = rbw * static_cast<double>(b);
    double v = 0.0;
    if (grid.smooth) {
      for (int j = 0; j < m; ++j) {
        // One-sided spectrum: leakage from negative frequencies folds back.
        const double f = std::abs(fb + u[j] * rbw);
        v += k[j] * evaluate(diff, src, f);
      }
    } else {
      v = evaluate(diff, src, b == 0 ? rbw / 2.0 : fb);
    }
    t.push_back(fb, v, rbw, grid.averages);
  }
  return t;
}

SpectrumTrace analytic_budget(const DifferentialCoefficients& diff, const std::vector<BudgetSource>& sources,
                              const SpanPlan& plan, bool smooth) {
  plan.validate();
  std::vector<SpectrumTrace> traces;
  for (const auto& s : plan.spans) traces.push_back(analytic_budget(diff, sources, {s.span_hz, s.lines, s.averages, smooth}));
  return stitch_spans(traces);
}

}  // namespace bhd
