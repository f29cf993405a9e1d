#include "shiftmean/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "shiftmean/errors.hpp"

namespace shiftmean {
namespace {

constexpr double kPi = std::numbers::pi;

cplx unit_phase(double angle) { return {std::cos(angle), std::sin(angle)}; }

double median(std::vector<double> v) {
  if (v.empty()) throw ParameterError("median of an empty sample");
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (v.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(v.begin(), mid);
  return 0.5 * (lower + upper);
}

}  // namespace

LinearFilter LinearFilter::projection(int cutoff, int max_freq) {
  if (cutoff < 0) throw ParameterError("negative spectral cut-off");
  LinearFilter f{max_freq, std::vector<double>(static_cast<std::size_t>(2 * max_freq + 1), 0.0)};
  for (int ell = -std::min(cutoff, max_freq); ell <= std::min(cutoff, max_freq); ++ell)
    f.weights[static_cast<std::size_t>(ell + max_freq)] = 1.0;
  return f;
}

LinearFilter LinearFilter::constant(double value, int max_freq) {
  return {max_freq, std::vector<double>(static_cast<std::size_t>(2 * max_freq + 1), value)};
}

double LinearFilter::weight(int ell) const {
  if (ell < -max_freq || ell > max_freq) return 0.0;
  return weights[static_cast<std::size_t>(ell + max_freq)];
}

Eigenvalues known_eigenvalues(const ShiftDensity& density, int max_freq) {
  Eigenvalues eig{density.eigenvalues(max_freq), 0.0};
  double largest = 0.0;
  for (const auto& g : eig.gamma.values()) largest = std::max(largest, std::abs(g));
  eig.floor = 1e-12 * largest;
  return eig;
}

Eigenvalues estimated_eigenvalues(std::span<const double> shifts, int max_freq) {
  if (shifts.empty()) throw ParameterError("no shifts");
  Eigenvalues eig{FourierCoeffs(max_freq), 1.0 / std::sqrt(static_cast<double>(shifts.size()))};
  for (int ell = -max_freq; ell <= max_freq; ++ell) eig.gamma[ell] = gamma_hat(shifts, ell);
  return eig;
}

EstimateResult spectral_cutoff(const FourierCoeffs& theta_hat, int cutoff, std::size_t grid_size) {
  if (cutoff < 0) throw ParameterError("negative spectral cut-off");
  if (cutoff > theta_hat.max_freq()) throw ParameterError("cut-off exceeds the available spectrum");
  FourierCoeffs kept(theta_hat.max_freq());
  for (int ell = -cutoff; ell <= cutoff; ++ell) kept[ell] = theta_hat[ell];
  EstimateResult r{from_fourier(kept, grid_size), kept, std::nullopt, {}, {}};
  r.meta.estimator = "spectral_cutoff";
  r.meta.cutoff = cutoff;
  return r;
}

int default_cutoff(std::size_t n, const SmoothnessParams& sp) {
  if (n < 2) throw ParameterError("cut-off rule needs n >= 2");
  if (!(sp.s > 0.0) || sp.nu < 0.0) throw ParameterError("smoothness must be positive and nu non-negative");
  const double exponent = 1.0 / (2.0 * sp.s + 2.0 * sp.nu + 1.0);
  const auto m = static_cast<int>(std::lround(std::pow(static_cast<double>(n), exponent)));
  return std::max(1, m);
}

double linear_risk_closed_form(const FourierCoeffs& theta, const ShiftDensity& density, const LinearFilter& filter,
                               double eps, std::size_t n) {
  if (n == 0) throw ParameterError("risk needs n >= 1");
  double bias = 0.0;
  double variance = 0.0;
  for (int ell = -theta.max_freq(); ell <= theta.max_freq(); ++ell) {
    const double lambda = filter.weight(ell);
    const double t2 = std::norm(theta[ell]);
    bias += (lambda - 1.0) * (lambda - 1.0) * t2;
    if (lambda == 0.0) continue;
    const double g2 = std::norm(density.gamma(ell));
    // same relative floor as known_eigenvalues (gamma_0 = 1)
    if (g2 < 1e-24)
      throw DomainError("filter puts weight on frequency " + std::to_string(ell) + " where gamma vanishes");
    variance += lambda * lambda * (t2 * (1.0 / g2 - 1.0) + eps * eps / g2);
  }
  return bias + variance / static_cast<double>(n);
}

double sigma_j(const Eigenvalues& eig, double eps, int j) {
  double sum = 0.0;
  bool any = false;
  for (int ell : omega(j).indices) {
    const cplx g = eig.gamma.get(ell);
    if (std::abs(g) < eig.floor) continue;
    sum += 1.0 / std::norm(g);
    any = true;
  }
  if (!any) throw DomainError("all eigenvalues on level " + std::to_string(j) + " are below the floor");
  return std::sqrt(std::ldexp(1.0, -j) * eps * eps * sum);
}

double sigma_j(const ShiftDensity& density, double eps, int j) {
  return sigma_j(known_eigenvalues(density, max_basis_frequency(j)), eps, j);
}

double threshold(int /*j*/, std::size_t n, const ThresholdPolicy& policy, double sigma) {
  if (n < 2) throw ParameterError("threshold needs n >= 2");
  const double nn = static_cast<double>(n);
  return 2.0 * sigma * std::sqrt(2.0 * policy.eta * std::log(nn) / nn);
}

WaveletBasisSpec default_levels(std::size_t n, double nu, std::size_t grid_size, LevelRule rule, int window_degree) {
  const int ceiling = max_level_for_grid(grid_size);
  if (ceiling < 3) throw ParameterError("grid too coarse for a level-3 wavelet basis");
  if (rule == LevelRule::GridCeiling) return {3, ceiling, window_degree};
  const double nn = static_cast<double>(std::max<std::size_t>(n, 3));
  const double j1_bound = std::pow(nn / std::log(nn), 1.0 / (2.0 * nu + 1.0));
  const double j0_bound = std::log(std::log(nn));
  const int j1 = static_cast<int>(std::floor(std::log2(j1_bound)));
  const int j0 = j0_bound >= 1.0 ? static_cast<int>(std::floor(std::log2(j0_bound))) : 0;
  const int j0c = std::clamp(j0, 3, ceiling);
  return {j0c, std::clamp(j1, j0c, ceiling), window_degree};
}

EstimateResult threshold_estimate(const FourierCoeffs& theta_hat, const Eigenvalues& noise_eigenvalues, double eps,
                                  const ThresholdPolicy& policy, const WaveletBasisSpec& spec_in, std::size_t n,
                                  std::size_t grid_size) {
  const WaveletBasisSpec spec = clamp_to_grid(spec_in, grid_size);
  WaveletCoeffs w = analyze(theta_hat, spec);
  EstimateResult r;
  r.meta.n = n;
  r.meta.eps = eps;
  r.meta.eta = policy.eta;
  r.meta.j0 = spec.j0;
  r.meta.j1 = spec.j1;
  for (int j = spec.j0; j <= spec.j1; ++j) {
    double lambda = std::numeric_limits<double>::infinity();
    try {
      lambda = threshold(j, n, policy, sigma_j(noise_eigenvalues, eps, j));
    } catch (const DomainError&) {
      // no usable eigenvalue on this level: every coefficient is killed
    }
    r.meta.thresholds.push_back(lambda);
    auto& level = w.level(j);
    std::vector<bool> mask(level.size());
    for (std::size_t k = 0; k < level.size(); ++k) {
      mask[k] = std::abs(level[k]) >= lambda;
      if (!mask[k]) level[k] = 0.0;
    }
    r.kept.push_back(std::move(mask));
  }
  r.theta_hat = synthesize(w, spec, theta_hat.max_freq());
  r.f_hat = from_fourier(r.theta_hat, grid_size);
  r.wavelet = std::move(w);
  return r;
}

EstimateResult hard_threshold_estimate(const CurveCoeffsMatrix& curves, const Eigenvalues& eig, double eps,
                                       const ThresholdPolicy& policy, const WaveletBasisSpec& spec) {
  const FourierCoeffs ctilde = sample_mean_coeffs(curves);
  Deconvolution d = deconvolve(ctilde, eig.gamma, eig.floor);
  EstimateResult r = threshold_estimate(d.theta, eig, eps, policy, spec, curves.curves(), curves.grid_size());
  r.meta.estimator = "hard_threshold";
  r.meta.zeroed_freqs = std::move(d.zeroed);
  return r;
}

EstimateResult hard_threshold_estimate(const CurveCoeffsMatrix& curves, const ShiftDensity& density, double eps,
                                       const ThresholdPolicy& policy, const WaveletBasisSpec& spec) {
  return hard_threshold_estimate(curves, known_eigenvalues(density, curves.max_freq()), eps, policy, spec);
}

double estimate_noise_variance(const FourierCoeffs& curve, const WaveletBasisSpec& spec) {
  const WaveletBasisSpec finest{spec.j1, spec.j1, spec.window_degree};
  const WaveletCoeffs w = analyze(curve, finest);
  const std::vector<double>& beta = w.level(spec.j1);
  const double centre = median(beta);
  std::vector<double> deviation(beta.size());
  std::transform(beta.begin(), beta.end(), deviation.begin(), [centre](double b) { return std::abs(b - centre); });
  const double sd = median(std::move(deviation)) / 0.6744897501960817;
  return sd * sd;
}

double estimate_noise_variance(const PeriodicSignal& curve, const WaveletBasisSpec& spec) {
  return estimate_noise_variance(to_fourier(curve, max_frequency_for_grid(curve.size())), spec);
}

double estimate_noise_level(const CurveCoeffsMatrix& curves, const WaveletBasisSpec& spec) {
  if (curves.curves() == 0) throw ParameterError("no curves");
  double sum = 0.0;
  for (std::size_t m = 0; m < curves.curves(); ++m) sum += estimate_noise_variance(curves.row(m), spec);
  return sum / static_cast<double>(curves.curves());
}

cplx gamma_hat(std::span<const double> shifts, int ell) {
  if (shifts.empty()) throw ParameterError("no shifts");
  cplx sum{};
  for (std::size_t m = 1; m < shifts.size(); ++m) sum += unit_phase(-2.0 * kPi * ell * shifts[m]);
  return sum / static_cast<double>(shifts.size());
}

double g_hat(std::span<const double> shifts, double x, int ell0) {
  cplx sum{};
  for (int ell = -ell0; ell <= ell0; ++ell) sum += gamma_hat(shifts, ell) * unit_phase(2.0 * kPi * ell * x);
  return sum.real();
}

EstimateResult estimate_fn1(const CurveCoeffsMatrix& curves, std::span<const double> shifts, double eps,
                            const ThresholdPolicy& policy, const WaveletBasisSpec& spec, int ell0) {
  if (shifts.size() != curves.curves()) throw ParameterError("one shift per curve required");
  EstimateResult r = hard_threshold_estimate(curves, estimated_eigenvalues(shifts, curves.max_freq()), eps,
                                             policy, spec);
  r.meta.estimator = "fn1";
  r.meta.ell0 = ell0;
  return r;
}

FourierCoeffs realigned_mean(const CurveCoeffsMatrix& curves, std::span<const double> shifts) {
  if (shifts.size() != curves.curves()) throw ParameterError("one shift per curve required");
  FourierCoeffs theta(curves.max_freq());
  for (std::size_t m = 1; m < curves.curves(); ++m)
    for (int ell = -curves.max_freq(); ell <= curves.max_freq(); ++ell)
      theta[ell] += curves.at(m, ell) * unit_phase(2.0 * kPi * ell * shifts[m]);
  const double inv = 1.0 / static_cast<double>(curves.curves());
  for (auto& v : theta.values()) v *= inv;
  return theta;
}

EstimateResult estimate_fn2(const CurveCoeffsMatrix& curves, std::span<const double> shifts, double eps,
                            const ThresholdPolicy& policy, const WaveletBasisSpec& spec) {
  const FourierCoeffs theta = realigned_mean(curves, shifts);
  EstimateResult r = threshold_estimate(theta, estimated_eigenvalues(shifts, curves.max_freq()), eps, policy, spec,
                                        curves.curves(), curves.grid_size());
  r.meta.estimator = "fn2";
  return r;
}

}  // namespace shiftmean
