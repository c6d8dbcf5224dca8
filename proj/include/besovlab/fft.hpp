#pragma once

#include <fftw3.h>

#include <complex>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "besovlab/grid.hpp"

namespace besovlab {

// Shared FFTW plan cache, keyed by (dim, points). Plans are created once with
// FFTW_ESTIMATE | FFTW_UNALIGNED so they can be replayed on any buffer via the
// new-array execute interface; creation is serialized, execution is not.
//
// Normalization: forward() returns coefficients c_k with
//   f(x) = sum_k c_k exp(i k.x),
// i.e. the raw r2c output divided by the total point count, and backward()
// inverts that without further scaling. backward() copies its input first
// because multi-dimensional c2r transforms clobber the source array.
class FftPlans {
 public:
  static FftPlans& instance() {
    static FftPlans plans;
    return plans;
  }

  void forward(const Grid& g, const double* samples, std::complex<double>* spectrum) {
    const Plan& p = plan_for(g);
    fftw_execute_dft_r2c(p.r2c, const_cast<double*>(samples), reinterpret_cast<fftw_complex*>(spectrum));
    const double scale = 1.0 / static_cast<double>(g.point_count());
    const std::size_t sc = g.spectral_count();
    for (std::size_t i = 0; i < sc; ++i) spectrum[i] *= scale;
  }

  void backward(const Grid& g, const std::complex<double>* spectrum, double* samples) {
    const Plan& p = plan_for(g);
    std::vector<std::complex<double>> scratch(spectrum, spectrum + g.spectral_count());
    fftw_execute_dft_c2r(p.c2r, reinterpret_cast<fftw_complex*>(scratch.data()), samples);
  }

  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;

 private:
  struct Plan {
    fftw_plan r2c = nullptr;
    fftw_plan c2r = nullptr;
  };

  FftPlans() = default;

  const Plan& plan_for(const Grid& g) {
    const std::pair<int, int> key{g.dim, g.points_per_axis};
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;

    std::vector<int> nn(static_cast<std::size_t>(g.dim), g.points_per_axis);
    std::vector<double> real_buf(g.point_count());
    std::vector<std::complex<double>> cplx_buf(g.spectral_count());
    Plan p;
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    p.r2c = fftw_plan_dft_r2c(g.dim, nn.data(), real_buf.data(),
                              reinterpret_cast<fftw_complex*>(cplx_buf.data()), flags);
    p.c2r = fftw_plan_dft_c2r(g.dim, nn.data(), reinterpret_cast<fftw_complex*>(cplx_buf.data()),
                              real_buf.data(), flags);
    if (p.r2c == nullptr || p.c2r == nullptr) throw CheckError("fftw plan creation failed");
    return cache_.emplace(key, p).first->second;
  }

  std::mutex mutex_;
  std::map<std::pair<int, int>, Plan> cache_;
};

}  // namespace besovlab
