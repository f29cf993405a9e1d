#include "shiftmean/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "shiftmean/errors.hpp"
#include "shiftmean/fft.hpp"

namespace shiftmean {
namespace {

constexpr double kPi = std::numbers::pi;

std::vector<cplx> spectrum(const PeriodicSignal& s) { return fft::forward_real(s.samples()); }

// Signed frequency of DFT bin k.
long signed_bin(std::size_t k, std::size_t n) {
  return k <= n / 2 ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n);
}

// Applies f(. - tau) to an unnormalized DFT in place. The Nyquist bin takes the real
// part of its phase so the result stays real; grid shifts then reproduce array rotation.
void shift_spectrum(std::vector<cplx>& bins, double tau) {
  const std::size_t n = bins.size();
  for (std::size_t k = 0; k < n; ++k) {
    const long ell = signed_bin(k, n);
    const double angle = -2.0 * kPi * static_cast<double>(ell) * tau;
    if (2 * k == n)
      bins[k] *= std::cos(angle);
    else
      bins[k] *= cplx(std::cos(angle), std::sin(angle));
  }
}

PeriodicSignal real_signal(const std::vector<cplx>& bins) {
  const auto values = fft::backward(bins);
  std::vector<double> out(values.size());
  const double inv = 1.0 / static_cast<double>(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = values[i].real() * inv;
  return PeriodicSignal(std::move(out));
}

double alignment_from_spectra(const std::vector<cplx>& curve, const std::vector<cplx>& reference, bool refine) {
  const std::size_t n = curve.size();
  // corr[k] = sum_i Y(x_i + k/N) R(x_i) up to a factor
  std::vector<cplx> product(n);
  for (std::size_t k = 0; k < n; ++k) product[k] = curve[k] * std::conj(reference[k]);
  const auto corr = fft::backward(product);
  std::size_t best = 0;
  for (std::size_t k = 1; k < n; ++k)
    if (corr[k].real() > corr[best].real()) best = k;
  double offset = static_cast<double>(signed_bin(best, n));
  if (refine) {
    const double left = corr[(best + n - 1) % n].real();
    const double centre = corr[best].real();
    const double right = corr[(best + 1) % n].real();
    const double denom = left - 2.0 * centre + right;
    if (denom < 0.0) offset += std::clamp(0.5 * (left - right) / denom, -0.5, 0.5);
  }
  return offset / static_cast<double>(n);
}

}  // namespace

PeriodicSignal cyclic_shift(const PeriodicSignal& signal, double tau) {
  auto bins = spectrum(signal);
  shift_spectrum(bins, tau);
  return real_signal(bins);
}

PeriodicSignal direct_mean(std::span<const PeriodicSignal> curves) {
  if (curves.empty()) throw ParameterError("direct mean of zero curves");
  const std::size_t n = curves.front().size();
  std::vector<double> acc(n, 0.0);
  for (const auto& c : curves) {
    if (c.size() != n) throw ParameterError("curves sampled on different grids");
    for (std::size_t i = 0; i < n; ++i) acc[i] += c[i];
  }
  for (double& v : acc) v /= static_cast<double>(curves.size());
  return PeriodicSignal(std::move(acc));
}

double best_alignment(const PeriodicSignal& curve, const PeriodicSignal& reference, bool refine) {
  if (curve.size() != reference.size()) throw ParameterError("curve and reference grids differ");
  return alignment_from_spectra(spectrum(curve), spectrum(reference), refine);
}

ProcrustesResult procrustean_mean(std::span<const PeriodicSignal> curves, const ProcrustesConfig& config) {
  if (curves.size() < 2) throw ParameterError("procrustean mean needs at least two curves");
  if (config.i_max < 1) throw ParameterError("i_max must be at least 1");
  const std::size_t grid = curves.front().size();
  std::vector<std::vector<cplx>> spectra;
  spectra.reserve(curves.size());
  std::vector<cplx> reference(grid);
  for (const auto& c : curves) {
    if (c.size() != grid) throw ParameterError("curves sampled on different grids");
    spectra.push_back(spectrum(c));
    for (std::size_t k = 0; k < grid; ++k) reference[k] += spectra.back()[k];
  }
  const double inv_n = 1.0 / static_cast<double>(curves.size());
  for (auto& v : reference) v *= inv_n;

  ProcrustesResult result;
  result.shifts.assign(curves.size(), 0.0);
  for (int i = 0; i < config.i_max; ++i) {
    std::vector<cplx> next(grid);
    for (std::size_t m = 0; m < curves.size(); ++m) {
      const double tau = alignment_from_spectra(spectra[m], reference, config.refine);
      result.shifts[m] = tau;
      auto aligned = spectra[m];
      shift_spectrum(aligned, -tau);
      for (std::size_t k = 0; k < grid; ++k) next[k] += aligned[k];
    }
    for (auto& v : next) v *= inv_n;
    reference = std::move(next);
  }

  // residual against the final reference, each curve at its best shift
  const double inv_grid2 = 1.0 / (static_cast<double>(grid) * static_cast<double>(grid));
  for (std::size_t m = 0; m < curves.size(); ++m) {
    const double tau = alignment_from_spectra(spectra[m], reference, config.refine);
    auto aligned = spectra[m];
    shift_spectrum(aligned, -tau);
    for (std::size_t k = 0; k < grid; ++k) result.residual += std::norm(aligned[k] - reference[k]) * inv_grid2;
  }
  result.mean = real_signal(reference);
  return result;
}

}  // namespace shiftmean
