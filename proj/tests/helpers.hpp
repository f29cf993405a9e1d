#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "shiftmean/fourier.hpp"

namespace testing {

using shiftmean::cplx;
inline constexpr double kPi = std::numbers::pi;

inline shiftmean::PeriodicSignal sampled(std::size_t n, auto fn) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = fn(static_cast<double>(i) / static_cast<double>(n));
  return shiftmean::PeriodicSignal(std::move(v));
}

inline shiftmean::PeriodicSignal random_signal(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> z(0.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = z(rng);
  return shiftmean::PeriodicSignal(std::move(v));
}

/// Brute-force DFT coefficient (1/N) sum_i f_i exp(-2 pi i l i/N).
inline cplx dft(const shiftmean::PeriodicSignal& f, int ell) {
  cplx s{};
  const double n = static_cast<double>(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * std::polar(1.0, -2.0 * kPi * ell * static_cast<double>(i) / n);
  return s / n;
}

/// Random conjugate-symmetric spectrum on -L..L.
inline shiftmean::FourierCoeffs random_real_spectrum(int L, std::mt19937_64& rng, double decay = 0.0) {
  std::normal_distribution<double> z(0.0, 1.0);
  shiftmean::FourierCoeffs t(L);
  t[0] = z(rng);
  for (int l = 1; l <= L; ++l) {
    const double s = std::pow(static_cast<double>(l), -decay);
    t[l] = cplx(z(rng), z(rng)) * s;
    t[-l] = std::conj(t[l]);
  }
  return t;
}

inline double max_abs_diff(const shiftmean::PeriodicSignal& a, const shiftmean::PeriodicSignal& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

/// Composite Simpson rule on [a, b] with an even number of panels.
inline double simpson(auto fn, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double s = fn(a) + fn(b);
  for (int i = 1; i < panels; ++i) s += fn(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace testing
