#pragma once

// Test-side reference computations, written without calling the library code
// they check.

#include <array>
#include <cmath>
#include <vector>

namespace oracle {

inline constexpr double kPi = 3.14159265358979323846;

/// Amplitude transfer from the five inputs (LO, signal, loss vacuum, diode-1
/// vacuum, diode-2 vacuum) to the two detected fields, built by multiplying
/// elementary two-port operations on a five-mode vector.
struct Transfer {
  std::array<double, 5> d1{};
  std::array<double, 5> d2{};
};

inline Transfer homodyne_transfer(double bs, double eta1, double eta2, double loss) {
  // Rows of a 5x5 real matrix acting on (A, B, V0, V1, V2); after the
  // beamsplitter, mode 0 carries arm 1 and mode 1 carries arm 2.
  using Mat = std::array<std::array<double, 5>, 5>;
  auto identity = [] {
    Mat m{};
    for (int i = 0; i < 5; ++i) m[i][i] = 1.0;
    return m;
  };
  auto mul = [](const Mat& a, const Mat& b) {
    Mat c{};
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j)
        for (int k = 0; k < 5; ++k) c[i][j] += a[i][k] * b[k][j];
    return c;
  };
  auto two_port = [&](int i, int j, double t) {
    // |t|^2 of mode i stays, the rest exchanges with mode j.
    Mat m = identity();
    const double r = std::sqrt(1.0 - t);
    m[i][i] = std::sqrt(t);
    m[i][j] = r;
    m[j][i] = r;
    m[j][j] = -std::sqrt(t);
    return m;
  };
  Mat bsm = identity();
  bsm[0][0] = std::sqrt(bs);
  bsm[0][1] = std::sqrt(1.0 - bs);
  bsm[1][0] = std::sqrt(1.0 - bs);
  bsm[1][1] = -std::sqrt(bs);
  Mat m = bsm;
  m = mul(two_port(0, 2, 1.0 - loss), m);
  m = mul(two_port(0, 3, eta1), m);
  m = mul(two_port(1, 4, eta2), m);
  Transfer t;
  for (int p = 0; p < 5; ++p) {
    t.d1[p] = m[0][p];
    t.d2[p] = m[1][p];
  }
  return t;
}

/// Trapezoid on a log grid with many points; used as a quadrature reference.
template <class F>
double log_trapezoid(F f, double a, double b, int n = 200000) {
  const double la = std::log(a), lb = std::log(b);
  const double h = (lb - la) / n;
  double acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double x = std::exp(la + i * h);
    const double w = (i == 0 || i == n) ? 0.5 : 1.0;
    acc += w * f(x) * x;
  }
  return acc * h;
}

/// |DFT of a periodic Hann window of length n|^2 at a fractional bin offset u,
/// normalized by n * sum(w^2) so that it integrates to one bin.
inline double hann_response(double u, int n) {
  double re = 0.0, im = 0.0, s2 = 0.0;
  for (int k = 0; k < n; ++k) {
    const double w = 0.5 - 0.5 * std::cos(2.0 * kPi * k / n);
    re += w * std::cos(2.0 * kPi * u * k / n);
    im -= w * std::sin(2.0 * kPi * u * k / n);
    s2 += w * w;
  }
  return (re * re + im * im) / (n * s2);
}

/// Below-threshold OPO quadrature variances, written out directly.
inline std::array<double, 2> opo(double pump, double eta, double omega) {
  const double x = std::sqrt(pump);
  const double vm = 1.0 - eta * 4.0 * x / ((1.0 + x) * (1.0 + x) + omega * omega);
  const double vp = 1.0 + eta * 4.0 * x / ((1.0 - x) * (1.0 - x) + omega * omega);
  return {vm, vp};
}

inline double db(double r) { return 10.0 * std::log10(r); }
inline double undb(double d) { return std::pow(10.0, d / 10.0); }

}  // namespace oracle
