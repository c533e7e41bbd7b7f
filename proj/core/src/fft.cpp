#include "bhd/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace bhd {

struct RealFft::Plans {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
  ~Plans() {
    std::lock_guard lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (inverse) fftw_destroy_plan(inverse);
  }
  static std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
  }
};

namespace {

std::shared_ptr<const RealFft::Plans> cached_plans(std::size_t n);

}  // namespace

RealFft::RealFft(std::size_t n) : n_(n) {
  if (n < 2) throw std::invalid_argument("RealFft: length must be >= 2");
  plans_ = cached_plans(n);
}

void RealFft::forward(std::span<const double> in, std::span<std::complex<double>> out) const {
  if (in.size() != n_ || out.size() != bins()) throw std::invalid_argument("RealFft::forward: size mismatch");
  // FFTW does not write to the input of an out-of-place r2c transform.
  fftw_execute_dft_r2c(plans_->forward, const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

void RealFft::inverse(std::span<const std::complex<double>> in, std::span<double> out) const {
  if (in.size() != bins() || out.size() != n_) throw std::invalid_argument("RealFft::inverse: size mismatch");
  // c2r destroys its input, so transform a scratch copy.
  std::vector<std::complex<double>> scratch(in.begin(), in.end());
  fftw_execute_dft_c2r(plans_->inverse, reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
}

namespace {

std::shared_ptr<const RealFft::Plans> cached_plans(std::size_t n) {
  // Intentionally never destroyed: plans outlive every RealFft, including static ones.
  static auto* cache = new std::map<std::size_t, std::shared_ptr<const RealFft::Plans>>();
  static std::mutex cache_mutex;
  {
    std::lock_guard lock(cache_mutex);
    if (auto it = cache->find(n); it != cache->end()) return it->second;
  }
  auto plans = std::make_shared<RealFft::Plans>();
  {
    std::lock_guard lock(RealFft::Plans::planner_mutex());
    std::vector<double> real(n);
    std::vector<std::complex<double>> cplx(n / 2 + 1);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    const int len = static_cast<int>(n);
    plans->forward = fftw_plan_dft_r2c_1d(len, real.data(), reinterpret_cast<fftw_complex*>(cplx.data()), flags);
    plans->inverse = fftw_plan_dft_c2r_1d(len, reinterpret_cast<fftw_complex*>(cplx.data()), real.data(), flags);
  }
  if (!plans->forward || !plans->inverse) throw std::runtime_error("RealFft: FFTW planning failed");
  std::lock_guard lock(cache_mutex);
  auto [it, inserted] = cache->emplace(n, plans);
  return it->second;
}

}  // namespace
}  // namespace bhd
