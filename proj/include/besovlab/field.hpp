#pragma once

#include <complex>
#include <span>
#include <vector>

#include "besovlab/fft.hpp"
#include "besovlab/grid.hpp"

namespace besovlab {

// Real scalar field on a Grid, stored as samples and/or spectral coefficients
// with lazy synchronization: reading one representation transforms from the
// other if it is stale. Mutating accessors invalidate the counterpart;
// overwrite accessors skip the sync when the old contents are irrelevant.
class Field {
 public:
  Field() = default;

  explicit Field(const Grid& grid)
      : grid_(grid),
        samples_(grid.point_count(), 0.0),
        spectrum_(grid.spectral_count(), std::complex<double>{0.0, 0.0}),
        samples_ok_(true),
        spectrum_ok_(true) {}

  const Grid& grid() const { return grid_; }

  std::span<const double> samples() const {
    sync_samples();
    return samples_;
  }
  std::span<const std::complex<double>> spectrum() const {
    sync_spectrum();
    return spectrum_;
  }

  std::span<double> mutable_samples() {
    sync_samples();
    spectrum_ok_ = false;
    return samples_;
  }
  std::span<std::complex<double>> mutable_spectrum() {
    sync_spectrum();
    samples_ok_ = false;
    return spectrum_;
  }

  std::span<double> overwrite_samples() {
    samples_ok_ = true;
    spectrum_ok_ = false;
    return samples_;
  }
  std::span<std::complex<double>> overwrite_spectrum() {
    spectrum_ok_ = true;
    samples_ok_ = false;
    return spectrum_;
  }

 private:
  void sync_samples() const {
    if (!samples_ok_) {
      FftPlans::instance().backward(grid_, spectrum_.data(), samples_.data());
      samples_ok_ = true;
    }
  }
  void sync_spectrum() const {
    if (!spectrum_ok_) {
      FftPlans::instance().forward(grid_, samples_.data(), spectrum_.data());
      spectrum_ok_ = true;
    }
  }

  Grid grid_;
  mutable std::vector<double> samples_;
  mutable std::vector<std::complex<double>> spectrum_;
  mutable bool samples_ok_ = false;
  mutable bool spectrum_ok_ = false;
};

// Fixed-size bundle of scalar fields sharing one grid, one per space axis.
class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(const Grid& grid) : comps_(static_cast<std::size_t>(grid.dim), Field(grid)) {}

  int size() const { return static_cast<int>(comps_.size()); }
  const Grid& grid() const { return comps_.front().grid(); }

  Field& operator[](int i) { return comps_[static_cast<std::size_t>(i)]; }
  const Field& operator[](int i) const { return comps_[static_cast<std::size_t>(i)]; }

  std::span<Field> components() { return comps_; }
  std::span<const Field> components() const { return comps_; }

 private:
  std::vector<Field> comps_;
};

}  // namespace besovlab
