#include "shiftmean/meyer.hpp"

#include <cmath>
#include <iostream>
#include <numbers>
#include <string>

#include "shiftmean/errors.hpp"
#include "shiftmean/fft.hpp"

namespace shiftmean {
namespace {

constexpr double kPi = std::numbers::pi;

struct WindowEntry {
  int ell;
  cplx value;  // m(l / 2^j), without the 2^{-j/2} factor or the location phase
};

std::vector<WindowEntry> level_windows(int j, int degree, bool wavelet) {
  const double scale = std::ldexp(1.0, -j);
  const FrequencySet set = wavelet ? omega(j) : omega_scaling(j);
  std::vector<WindowEntry> out;
  out.reserve(set.indices.size());
  for (int ell : set.indices) {
    const double xi = ell * scale;
    out.push_back({ell, wavelet ? meyer_wavelet_window(xi, degree) : cplx(meyer_scaling_window(xi, degree))});
  }
  return out;
}

void check_location(int j, int k) {
  if (j < 0) throw ParameterError("negative wavelet level");
  if (k < 0 || k >= (1 << j))
    throw ParameterError("location " + std::to_string(k) + " outside [0, 2^" + std::to_string(j) + ")");
}

void check_spec(const WaveletBasisSpec& spec) {
  if (spec.j0 < 0 || spec.j1 < spec.j0) throw ParameterError("wavelet levels require 0 <= j0 <= j1");
  if (spec.window_degree < 0 || spec.window_degree > 4) throw ParameterError("window degree must be in 0..4");
}

// Levels j0..j1 fit below the spectrum bound of theta.
void check_coverage(const FourierCoeffs& theta, const WaveletBasisSpec& spec) {
  for (int j = spec.j0; j <= spec.j1; ++j) {
    const int needed = max_basis_frequency(j);
    if (needed > theta.max_freq())
      throw ParameterError("spectrum stops at |l| = " + std::to_string(theta.max_freq()) + " but level " +
                           std::to_string(j) + " needs the band " + std::to_string(omega(j).indices.back()) +
                           ".." + std::to_string(needed));
  }
}

std::vector<double> analyze_level(const FourierCoeffs& theta, int j, int degree, bool wavelet, TransformPath path) {
  const auto windows = level_windows(j, degree, wavelet);
  const int size = 1 << j;
  const double norm = std::sqrt(std::ldexp(1.0, -j));
  std::vector<double> out(static_cast<std::size_t>(size));
  if (path == TransformPath::Direct) {
    for (int k = 0; k < size; ++k) {
      cplx sum{};
      for (const auto& w : windows) {
        const double phase = 2.0 * kPi * w.ell * static_cast<double>(k) / size;
        sum += theta[w.ell] * std::conj(w.value) * cplx(std::cos(phase), std::sin(phase));
      }
      out[static_cast<std::size_t>(k)] = norm * sum.real();
    }
    return out;
  }
  std::vector<cplx> folded(static_cast<std::size_t>(size));
  for (const auto& w : windows) {
    const int r = ((w.ell % size) + size) % size;
    folded[static_cast<std::size_t>(r)] += theta[w.ell] * std::conj(w.value);
  }
  const auto values = fft::backward(folded);
  for (int k = 0; k < size; ++k) out[static_cast<std::size_t>(k)] = norm * values[static_cast<std::size_t>(k)].real();
  return out;
}

void synthesize_level(const std::vector<double>& coeffs, int j, int degree, bool wavelet, TransformPath path,
                      FourierCoeffs& theta) {
  const auto windows = level_windows(j, degree, wavelet);
  const int size = 1 << j;
  const double norm = std::sqrt(std::ldexp(1.0, -j));
  if (path == TransformPath::Direct) {
    for (const auto& w : windows) {
      if (!theta.contains(w.ell)) continue;
      cplx sum{};
      for (int k = 0; k < size; ++k) {
        const double phase = -2.0 * kPi * w.ell * static_cast<double>(k) / size;
        sum += coeffs[static_cast<std::size_t>(k)] * cplx(std::cos(phase), std::sin(phase));
      }
      theta[w.ell] += norm * w.value * sum;
    }
    return;
  }
  const std::vector<cplx> in(coeffs.begin(), coeffs.end());
  const auto spectrum = fft::forward(in);
  for (const auto& w : windows) {
    if (!theta.contains(w.ell)) continue;
    const int r = ((w.ell % size) + size) % size;
    theta[w.ell] += norm * w.value * spectrum[static_cast<std::size_t>(r)];
  }
}

}  // namespace

WaveletCoeffs WaveletCoeffs::zeros(int j0, int j1) {
  WaveletCoeffs w;
  w.j0 = j0;
  w.coarse.assign(static_cast<std::size_t>(1) << j0, 0.0);
  for (int j = j0; j <= j1; ++j) w.details.emplace_back(static_cast<std::size_t>(1) << j, 0.0);
  return w;
}

double WaveletCoeffs::squared_norm() const {
  double s = 0.0;
  for (double c : coarse) s += c * c;
  for (const auto& level : details)
    for (double b : level) s += b * b;
  return s;
}

double meyer_polynomial(double t, int degree) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  switch (degree) {
    case 0: return t;
    case 1: return t * t * (3 - 2 * t);
    case 2: return t * t * t * (10 - 15 * t + 6 * t * t);
    case 4: return std::pow(t, 5) * (126 - 420 * t + 540 * t * t - 315 * t * t * t + 70 * t * t * t * t);
    default: return std::pow(t, 4) * (35 - 84 * t + 70 * t * t - 20 * t * t * t);
  }
}

double meyer_scaling_window(double xi, int degree) {
  const double a = std::abs(xi);
  if (a <= 1.0 / 3.0) return 1.0;
  if (a >= 2.0 / 3.0) return 0.0;
  return std::cos(0.5 * kPi * meyer_polynomial(3.0 * a - 1.0, degree));
}

cplx meyer_wavelet_window(double xi, int degree) {
  const double a = std::abs(xi);
  double b = 0.0;
  if (a <= 1.0 / 3.0 || a >= 4.0 / 3.0)
    return 0.0;
  else if (a <= 2.0 / 3.0)
    b = std::sin(0.5 * kPi * meyer_polynomial(3.0 * a - 1.0, degree));
  else
    b = std::cos(0.5 * kPi * meyer_polynomial(1.5 * a - 1.0, degree));
  return b * cplx(std::cos(kPi * xi), -std::sin(kPi * xi));
}

cplx psi_fourier(int j, int k, int ell, int degree) {
  check_location(j, k);
  const double size = std::ldexp(1.0, j);
  const cplx window = meyer_wavelet_window(ell / size, degree);
  if (window == cplx{}) return 0.0;
  const double phase = -2.0 * kPi * ell * k / size;
  return window * cplx(std::cos(phase), std::sin(phase)) / std::sqrt(size);
}

cplx phi_fourier(int j0, int k, int ell, int degree) {
  check_location(j0, k);
  const double size = std::ldexp(1.0, j0);
  const double window = meyer_scaling_window(ell / size, degree);
  if (window == 0.0) return 0.0;
  const double phase = -2.0 * kPi * ell * k / size;
  return window * cplx(std::cos(phase), std::sin(phase)) / std::sqrt(size);
}

FrequencySet omega(int j) {
  if (j < 0) throw ParameterError("negative wavelet level");
  // open band 2^j/3 < |l| < 2^{j+2}/3; the window is positive strictly inside it
  FrequencySet set{j, {}};
  const long lo = ((1L << j) / 3) + 1;
  const long hi = (1L << (j + 2)) / 3;
  for (long l = -hi; l <= -lo; ++l) set.indices.push_back(static_cast<int>(l));
  for (long l = lo; l <= hi; ++l) set.indices.push_back(static_cast<int>(l));
  return set;
}

FrequencySet omega_scaling(int j0) {
  if (j0 < 0) throw ParameterError("negative wavelet level");
  FrequencySet set{j0, {}};
  const long hi = (1L << (j0 + 1)) / 3;
  for (long l = -hi; l <= hi; ++l) set.indices.push_back(static_cast<int>(l));
  return set;
}

int max_basis_frequency(int j1) { return static_cast<int>((1L << (j1 + 2)) / 3); }

int max_level_for_grid(std::size_t grid_size) {
  const int limit = max_frequency_for_grid(grid_size);
  int j = -1;
  while (max_basis_frequency(j + 1) <= limit) ++j;
  return j;
}

WaveletBasisSpec clamp_to_grid(WaveletBasisSpec spec, std::size_t grid_size) {
  const int ceiling = max_level_for_grid(grid_size);
  if (spec.j1 > ceiling) {
    std::clog << "warning: finest level " << spec.j1 << " exceeds what a grid of " << grid_size
              << " points supports; using " << ceiling << "\n";
    spec.j1 = ceiling;
  }
  if (spec.j0 > spec.j1) throw ParameterError("coarse level exceeds the grid ceiling");
  return spec;
}

WaveletCoeffs analyze(const FourierCoeffs& theta, const WaveletBasisSpec& spec, TransformPath path) {
  check_spec(spec);
  check_coverage(theta, spec);
  WaveletCoeffs w;
  w.j0 = spec.j0;
  w.coarse = analyze_level(theta, spec.j0, spec.window_degree, false, path);
  for (int j = spec.j0; j <= spec.j1; ++j)
    w.details.push_back(analyze_level(theta, j, spec.window_degree, true, path));
  return w;
}

FourierCoeffs synthesize(const WaveletCoeffs& w, const WaveletBasisSpec& spec, int max_freq, TransformPath path) {
  check_spec(spec);
  if (w.j0 != spec.j0 || w.j1() != spec.j1) throw ParameterError("wavelet coefficients do not match the basis levels");
  if (w.coarse.size() != (static_cast<std::size_t>(1) << spec.j0))
    throw ParameterError("coarse coefficient count must be 2^j0");
  for (int j = spec.j0; j <= spec.j1; ++j)
    if (w.level(j).size() != (static_cast<std::size_t>(1) << j))
      throw ParameterError("detail coefficient count at level " + std::to_string(j) + " must be 2^j");
  FourierCoeffs theta(max_freq);
  synthesize_level(w.coarse, spec.j0, spec.window_degree, false, path, theta);
  for (int j = spec.j0; j <= spec.j1; ++j) synthesize_level(w.level(j), j, spec.window_degree, true, path, theta);
  return theta;
}

}  // namespace shiftmean
