#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>

namespace bhd {

/// Real-to-complex FFT of fixed length backed by FFTW. Plans are cached per
/// length and shared; execution is thread-safe. Plans use FFTW_ESTIMATE so
/// results are bit-reproducible run to run.
class RealFft {
 public:
  explicit RealFft(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  std::size_t bins() const noexcept { return n_ / 2 + 1; }

  /// out has bins() entries. Unnormalized: X_k = sum_n x_n e^{-2 pi i k n / N}.
  void forward(std::span<const double> in, std::span<std::complex<double>> out) const;

  /// Unnormalized inverse (no 1/N). `in` is not modified.
  void inverse(std::span<const std::complex<double>> in, std::span<double> out) const;

  struct Plans;  // implementation detail

 private:
  std::size_t n_;
  std::shared_ptr<const Plans> plans_;
};

}  // namespace bhd
