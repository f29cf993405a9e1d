#include "shiftmean/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "shiftmean/density.hpp"
#include "shiftmean/errors.hpp"
#include "shiftmean/fft.hpp"

namespace shiftmean {

PeriodicSignal::PeriodicSignal(std::vector<double> samples) : samples_(std::move(samples)) {
  if (!fft::is_power_of_two(samples_.size()) || samples_.size() < 8)
    throw ParameterError("signal grid size must be a power of two >= 8, got " + std::to_string(samples_.size()));
  for (double v : samples_)
    if (!std::isfinite(v)) throw ParameterError("signal samples must be finite");
}

PeriodicSignal PeriodicSignal::zeros(std::size_t grid_size) {
  return PeriodicSignal(std::vector<double>(grid_size, 0.0));
}

double PeriodicSignal::norm_squared() const {
  double s = 0.0;
  for (double v : samples_) s += v * v;
  return samples_.empty() ? 0.0 : s / static_cast<double>(samples_.size());
}

FourierCoeffs::FourierCoeffs(int max_freq) : max_freq_(max_freq) {
  if (max_freq < 0) throw ParameterError("negative frequency bound");
  values_.assign(static_cast<std::size_t>(2 * max_freq + 1), cplx{});
}

FourierCoeffs::FourierCoeffs(int max_freq, std::vector<cplx> values) : max_freq_(max_freq), values_(std::move(values)) {
  if (max_freq < 0 || values_.size() != static_cast<std::size_t>(2 * max_freq + 1))
    throw ParameterError("coefficient array length does not match 2L+1");
}

cplx FourierCoeffs::get(int ell) const { return contains(ell) ? (*this)[ell] : cplx{}; }

double FourierCoeffs::energy() const {
  double s = 0.0;
  for (const auto& v : values_) s += std::norm(v);
  return s;
}

CurveCoeffsMatrix::CurveCoeffsMatrix(std::size_t curves, int max_freq, std::size_t grid_size)
    : curves_(curves), max_freq_(max_freq), grid_size_(grid_size) {
  if (max_freq < 0) throw ParameterError("negative frequency bound");
  data_.assign(curves * width(), cplx{});
}

FourierCoeffs CurveCoeffsMatrix::row(std::size_t m) const {
  auto first = data_.begin() + static_cast<std::ptrdiff_t>(m * width());
  return FourierCoeffs(max_freq_, std::vector<cplx>(first, first + static_cast<std::ptrdiff_t>(width())));
}

void CurveCoeffsMatrix::set_row(std::size_t m, const FourierCoeffs& coeffs) {
  if (coeffs.max_freq() != max_freq_) throw ParameterError("row frequency range mismatch");
  std::copy(coeffs.values().begin(), coeffs.values().end(),
            data_.begin() + static_cast<std::ptrdiff_t>(m * width()));
}

FourierCoeffs to_fourier(const PeriodicSignal& signal, int max_freq) {
  const std::size_t n = signal.size();
  if (max_freq < 0 || max_freq > max_frequency_for_grid(n))
    throw ParameterError("frequency bound " + std::to_string(max_freq) + " outside [0, N/2-1] for N=" +
                         std::to_string(n));
  const auto spectrum = fft::forward_real(signal.samples());
  FourierCoeffs out(max_freq);
  const double inv_n = 1.0 / static_cast<double>(n);
  const auto nn = static_cast<long>(n);
  for (int ell = -max_freq; ell <= max_freq; ++ell)
    out[ell] = spectrum[static_cast<std::size_t>(((ell % nn) + nn) % nn)] * inv_n;
  return out;
}

PeriodicSignal from_fourier(const FourierCoeffs& coeffs, std::size_t grid_size) {
  if (!fft::is_power_of_two(grid_size) || grid_size < 8)
    throw ParameterError("grid size must be a power of two >= 8");
  if (coeffs.max_freq() >= static_cast<int>(grid_size / 2))
    throw ParameterError("grid of " + std::to_string(grid_size) + " points cannot represent frequency " +
                         std::to_string(coeffs.max_freq()));
  std::vector<cplx> bins(grid_size);
  const auto nn = static_cast<long>(grid_size);
  double scale = 0.0;
  for (int ell = -coeffs.max_freq(); ell <= coeffs.max_freq(); ++ell) {
    bins[static_cast<std::size_t>(((ell % nn) + nn) % nn)] = coeffs[ell];
    scale += std::abs(coeffs[ell]);
  }
  const auto values = fft::backward(bins);
  std::vector<double> samples(grid_size);
  double residue = 0.0;
  for (std::size_t i = 0; i < grid_size; ++i) {
    samples[i] = values[i].real();
    residue = std::max(residue, std::abs(values[i].imag()));
  }
  if (residue > 1e-8 * std::max(scale, 1e-300))
    throw ConjugateSymmetryError("imaginary residue " + std::to_string(residue) +
                                 " after synthesis: spectrum is not conjugate symmetric");
  return PeriodicSignal(std::move(samples));
}

CurveCoeffsMatrix curve_coeffs(std::span<const PeriodicSignal> curves, int max_freq) {
  if (curves.empty()) throw ParameterError("no curves");
  const std::size_t grid = curves.front().size();
  CurveCoeffsMatrix out(curves.size(), max_freq, grid);
  for (std::size_t m = 0; m < curves.size(); ++m) {
    if (curves[m].size() != grid) throw ParameterError("curves sampled on different grids");
    out.set_row(m, to_fourier(curves[m], max_freq));
  }
  return out;
}

FourierCoeffs sample_mean_coeffs(const CurveCoeffsMatrix& curves) {
  if (curves.curves() == 0) throw ParameterError("sample mean of an empty curve matrix");
  FourierCoeffs mean(curves.max_freq());
  for (std::size_t m = 0; m < curves.curves(); ++m)
    for (int ell = -curves.max_freq(); ell <= curves.max_freq(); ++ell) mean[ell] += curves.at(m, ell);
  const double inv = 1.0 / static_cast<double>(curves.curves());
  for (auto& v : mean.values()) v *= inv;
  return mean;
}

Deconvolution deconvolve(const FourierCoeffs& ctilde, const FourierCoeffs& gamma, double floor) {
  if (!(floor > 0.0)) throw ParameterError("deconvolution floor must be positive");
  if (gamma.max_freq() < ctilde.max_freq()) throw ParameterError("eigenvalues do not cover the spectrum");
  Deconvolution out{FourierCoeffs(ctilde.max_freq()), {}};
  for (int ell = -ctilde.max_freq(); ell <= ctilde.max_freq(); ++ell) {
    const cplx g = gamma[ell];
    if (std::abs(g) >= floor)
      out.theta[ell] = ctilde[ell] / g;
    else
      out.zeroed.push_back(ell);
  }
  return out;
}

Deconvolution deconvolve(const FourierCoeffs& ctilde, const ShiftDensity& density, double floor) {
  return deconvolve(ctilde, density.eigenvalues(ctilde.max_freq()), floor);
}

FourierCoeffs truncate(const FourierCoeffs& coeffs, int new_max) {
  FourierCoeffs out(new_max);
  for (int ell = -new_max; ell <= new_max; ++ell) out[ell] = coeffs.get(ell);
  return out;
}

}  // namespace shiftmean
