#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shiftmean/density.hpp"
#include "shiftmean/fourier.hpp"
#include "shiftmean/meyer.hpp"

namespace shiftmean {

/// Real weights lambda_l over l = -L..L.
struct LinearFilter {
  int max_freq = 0;
  std::vector<double> weights;

  static LinearFilter projection(int cutoff, int max_freq);
  static LinearFilter constant(double value, int max_freq);
  double weight(int ell) const;
};

enum class SigmaSource { KnownDensity, EstimatedGamma };

struct ThresholdPolicy {
  double eta = 1.5;
  SigmaSource sigma_source = SigmaSource::KnownDensity;
};

struct SmoothnessParams {
  double s = 1.0;
  double nu = 0.0;
};

/// How j0/j1 are picked when the caller does not fix them.
enum class LevelRule {
  GridCeiling,  ///< j0 = 3, j1 = finest level the grid carries
  Theoretical,  ///< 2^j1 <= (n/log n)^{1/(2 nu+1)}, 2^j0 <= log log n, clamped to [3, ceiling]
};

/// Eigenvalues gamma_l with the floor below which a frequency carries no signal.
struct Eigenvalues {
  FourierCoeffs gamma;
  double floor = 1e-12;
};

/// Known density: floor 1e-12 * max |gamma|.
Eigenvalues known_eigenvalues(const ShiftDensity& density, int max_freq);
/// Estimated from shifts (literal 1/n sum over m >= 2): floor 1/sqrt(n).
Eigenvalues estimated_eigenvalues(std::span<const double> shifts, int max_freq);

struct EstimateMeta {
  std::string estimator;
  std::size_t n = 0;
  double eps = 0.0;  ///< noise level used for thresholds (estimated or known)
  double eta = 0.0;
  int j0 = -1;
  int j1 = -1;
  int ell0 = -1;
  int cutoff = -1;
  std::vector<int> zeroed_freqs;
  std::vector<double> thresholds;  ///< lambda_j for j = j0..j1; +inf when a level has no usable eigenvalue
};

struct EstimateResult {
  PeriodicSignal f_hat;
  FourierCoeffs theta_hat;
  std::optional<WaveletCoeffs> wavelet;      ///< coefficients after thresholding
  std::vector<std::vector<bool>> kept;       ///< kept[j - j0][k]
  EstimateMeta meta;
};

EstimateResult spectral_cutoff(const FourierCoeffs& theta_hat, int cutoff, std::size_t grid_size);

int default_cutoff(std::size_t n, const SmoothnessParams& sp);

/// Bias plus variance of the linear estimator lambda_l c~_l / gamma_l.
double linear_risk_closed_form(const FourierCoeffs& theta, const ShiftDensity& density, const LinearFilter& filter,
                               double eps, std::size_t n);

/// sqrt(2^{-j} eps^2 sum_{l in Omega_j} |gamma_l|^{-2}) over frequencies at or above the floor.
double sigma_j(const Eigenvalues& eig, double eps, int j);
double sigma_j(const ShiftDensity& density, double eps, int j);

/// lambda_j = 2 sigma_j sqrt(2 eta log(n) / n).
double threshold(int j, std::size_t n, const ThresholdPolicy& policy, double sigma);

WaveletBasisSpec default_levels(std::size_t n, double nu, std::size_t grid_size, LevelRule rule,
                                int window_degree = 3);

/// Wavelet hard thresholding of a deconvolved spectrum. Coarse coefficients are kept;
/// beta is kept when |beta| >= lambda_j.
EstimateResult threshold_estimate(const FourierCoeffs& theta_hat, const Eigenvalues& noise_eigenvalues, double eps,
                                  const ThresholdPolicy& policy, const WaveletBasisSpec& spec, std::size_t n,
                                  std::size_t grid_size);

/// Known-density pipeline: sample mean, deconvolution, thresholding, synthesis.
EstimateResult hard_threshold_estimate(const CurveCoeffsMatrix& curves, const ShiftDensity& density, double eps,
                                       const ThresholdPolicy& policy, const WaveletBasisSpec& spec);

/// Same pipeline with arbitrary eigenvalues (used for the estimated-density variant).
EstimateResult hard_threshold_estimate(const CurveCoeffsMatrix& curves, const Eigenvalues& eig, double eps,
                                       const ThresholdPolicy& policy, const WaveletBasisSpec& spec);

/// Per-curve noise variance from the finest-level detail coefficients (MAD rule).
double estimate_noise_variance(const FourierCoeffs& curve, const WaveletBasisSpec& spec);
double estimate_noise_variance(const PeriodicSignal& curve, const WaveletBasisSpec& spec);
/// (1/n) sum_m eps_m^2.
double estimate_noise_level(const CurveCoeffsMatrix& curves, const WaveletBasisSpec& spec);

/// (1/n) sum_{m>=2} exp(-2 pi i l tau_m); n = shifts.size().
cplx gamma_hat(std::span<const double> shifts, int ell);
/// sum_{|l|<=ell0} gamma_hat_l exp(+2 pi i l x). May be negative.
double g_hat(std::span<const double> shifts, double x, int ell0);

EstimateResult estimate_fn1(const CurveCoeffsMatrix& curves, std::span<const double> shifts, double eps,
                            const ThresholdPolicy& policy, const WaveletBasisSpec& spec, int ell0);

/// Realigned average (1/n) sum_{m>=2} c_{m,l} exp(+2 pi i l tau_m).
FourierCoeffs realigned_mean(const CurveCoeffsMatrix& curves, std::span<const double> shifts);

EstimateResult estimate_fn2(const CurveCoeffsMatrix& curves, std::span<const double> shifts, double eps,
                            const ThresholdPolicy& policy, const WaveletBasisSpec& spec);

}  // namespace shiftmean
