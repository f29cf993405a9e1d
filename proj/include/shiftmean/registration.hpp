#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shiftmean/density.hpp"
#include "shiftmean/estimators.hpp"
#include "shiftmean/fourier.hpp"

namespace shiftmean {

struct DescentConfig {
  int ell0 = 3;
  double kappa = 2.0;
  double rho = 1e-6;
  int max_iters = 500;
};

struct DescentStep {
  int iter = 0;
  double criterion = 0.0;
  double step = 0.0;
  double grad_norm = 0.0;
};

struct DescentTrace {
  std::vector<DescentStep> steps;  ///< entry 0 is the starting point
  std::vector<double> taus;
  std::string termination;  ///< "converged", "stationary start", "max iterations", "step underflow"
  std::size_t outside_support = 0;  ///< final shifts with |tau| > 1/4
  bool weak_first_harmonic = false;  ///< mean |c_{m,1}| below 1e-8
};

/// M_n(tau) = (1/n) sum_m sum_{|l|<=ell0} |c_{m,l} e^{2 pi i l tau_m} - (1/n) sum_q c_{q,l} e^{2 pi i l tau_q}|^2.
double criterion_mn(const CurveCoeffsMatrix& curves, std::span<const double> taus, int ell0);

/// Analytic gradient of criterion_mn.
std::vector<double> gradient_mn(const CurveCoeffsMatrix& curves, std::span<const double> taus, int ell0);

struct ShiftEstimate {
  std::vector<double> taus;
  DescentTrace trace;
};

/// Projected gradient descent from tau = 0 under tau_1 = -sum_{m>=2} tau_m.
ShiftEstimate estimate_shifts(const CurveCoeffsMatrix& curves, const DescentConfig& config);

/// Truncated realigned average sum_{|l|<=ell0} theta_l e^{2 pi i l x},
/// theta_l = (1/n) sum_m c_{m,l} e^{2 pi i l tau_m}.
EstimateResult frechet_mean(const CurveCoeffsMatrix& curves, std::span<const double> taus, int ell0);

/// Van Trees lower bound on E (1/n) sum_m (tau_hat_m - tau_m)^2.
double van_trees_bound(const FourierCoeffs& theta, double eps, const ShiftDensity& density,
                       std::optional<int> ell0 = std::nullopt);

/// (1/n) sum_m (tau_hat_m - (tau_m - mean tau))^2.
double centered_shift_error(std::span<const double> estimate, std::span<const double> truth);

}  // namespace shiftmean
