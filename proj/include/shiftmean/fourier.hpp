#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace shiftmean {

using cplx = std::complex<double>;

class ShiftDensity;

/// Real samples of a 1-periodic function at x_i = i/N, N = 2^J with J >= 3.
class PeriodicSignal {
 public:
  PeriodicSignal() = default;
  explicit PeriodicSignal(std::vector<double> samples);

  static PeriodicSignal zeros(std::size_t grid_size);

  std::size_t size() const { return samples_.size(); }
  std::span<const double> samples() const { return samples_; }
  double operator[](std::size_t i) const { return samples_[i]; }
  double x(std::size_t i) const { return static_cast<double>(i) / static_cast<double>(size()); }

  /// Grid quadrature of the squared L2 norm on [0,1).
  double norm_squared() const;

  bool operator==(const PeriodicSignal&) const = default;

 private:
  std::vector<double> samples_;
};

/// Complex Fourier coefficients theta_l for l = -L..L with the convention
/// theta_l = int_0^1 f(x) exp(-2 pi i l x) dx, f(x) = sum_l theta_l exp(+2 pi i l x).
class FourierCoeffs {
 public:
  FourierCoeffs() = default;
  explicit FourierCoeffs(int max_freq);
  FourierCoeffs(int max_freq, std::vector<cplx> values);

  int max_freq() const { return max_freq_; }
  std::size_t size() const { return values_.size(); }

  cplx& operator[](int ell) { return values_[static_cast<std::size_t>(ell + max_freq_)]; }
  const cplx& operator[](int ell) const { return values_[static_cast<std::size_t>(ell + max_freq_)]; }
  /// Checked access; frequencies outside -L..L read as zero.
  cplx get(int ell) const;
  bool contains(int ell) const { return ell >= -max_freq_ && ell <= max_freq_; }

  std::span<const cplx> values() const { return values_; }
  std::span<cplx> values() { return values_; }

  /// Sum of |theta_l|^2, the squared L2 norm of the synthesized signal.
  double energy() const;

 private:
  int max_freq_ = 0;
  std::vector<cplx> values_{cplx{}};
};

/// c_{m,l} for n curves, all rows sharing the frequency range -L..L.
/// grid_size records the sampling grid the rows came from (0 when unknown).
class CurveCoeffsMatrix {
 public:
  CurveCoeffsMatrix() = default;
  CurveCoeffsMatrix(std::size_t curves, int max_freq, std::size_t grid_size = 0);

  std::size_t curves() const { return curves_; }
  int max_freq() const { return max_freq_; }
  std::size_t grid_size() const { return grid_size_; }
  std::size_t width() const { return static_cast<std::size_t>(2 * max_freq_ + 1); }

  cplx& at(std::size_t m, int ell) { return data_[m * width() + static_cast<std::size_t>(ell + max_freq_)]; }
  const cplx& at(std::size_t m, int ell) const {
    return data_[m * width() + static_cast<std::size_t>(ell + max_freq_)];
  }

  FourierCoeffs row(std::size_t m) const;
  void set_row(std::size_t m, const FourierCoeffs& coeffs);

 private:
  std::size_t curves_ = 0;
  int max_freq_ = 0;
  std::size_t grid_size_ = 0;
  std::vector<cplx> data_;
};

/// Largest usable frequency bound on a grid of N points.
inline int max_frequency_for_grid(std::size_t grid_size) { return static_cast<int>(grid_size / 2) - 1; }

FourierCoeffs to_fourier(const PeriodicSignal& signal, int max_freq);

/// Synthesis on N points. Throws ConjugateSymmetryError when the imaginary
/// residue exceeds 1e-8 times the signal scale.
PeriodicSignal from_fourier(const FourierCoeffs& coeffs, std::size_t grid_size);

CurveCoeffsMatrix curve_coeffs(std::span<const PeriodicSignal> curves, int max_freq);

/// Column means c~_l = (1/n) sum_m c_{m,l}.
FourierCoeffs sample_mean_coeffs(const CurveCoeffsMatrix& curves);

struct Deconvolution {
  FourierCoeffs theta;
  std::vector<int> zeroed;  ///< frequencies with |gamma_l| below the floor, ascending
};

/// theta_l = c~_l / gamma_l where |gamma_l| >= floor, zero elsewhere.
Deconvolution deconvolve(const FourierCoeffs& ctilde, const FourierCoeffs& gamma, double floor);
Deconvolution deconvolve(const FourierCoeffs& ctilde, const ShiftDensity& density, double floor);

/// Keeps |l| <= new_max (zero-padding when new_max exceeds the current bound).
FourierCoeffs truncate(const FourierCoeffs& coeffs, int new_max);

}  // namespace shiftmean
