#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shiftmean/registration.hpp"
#include "shiftmean/simulation.hpp"

namespace shiftmean {

/// Shared per-dataset intermediates (curve spectra, shift estimates, noise estimate),
/// computed on first use.
class EstimationContext {
 public:
  EstimationContext(const ExperimentConfig& config, std::span<const PeriodicSignal> curves);

  const ExperimentConfig& config() const { return config_; }
  std::span<const PeriodicSignal> curves() const { return curves_; }
  const CurveCoeffsMatrix& coeffs();
  const ShiftEstimate& shifts(int ell0);
  /// eps estimated from the finest detail level of every curve.
  double estimated_eps();
  double known_eps() const { return white_noise_level(config_); }

 private:
  ExperimentConfig config_;
  std::span<const PeriodicSignal> curves_;
  std::optional<CurveCoeffsMatrix> coeffs_;
  std::map<int, ShiftEstimate> shifts_;
  std::optional<double> eps_hat_;
};

/// Levels for a thresholding estimator: explicit j0/j1 when given, the config's level rule otherwise.
WaveletBasisSpec resolved_levels(const EstimatorSpec& spec, const ExperimentConfig& config);

EstimateResult run_estimator(const EstimatorSpec& spec, EstimationContext& context);

struct EstimatorRisk {
  std::string key;
  std::string name;
  double mean_mise = 0.0;              ///< NaN when every replication failed
  std::optional<double> std_error;     ///< absent with fewer than two successful replications
  std::size_t replications = 0;        ///< successful replications
  std::size_t failures = 0;
  std::vector<std::optional<double>> values;  ///< per replication, empty on failure
  std::vector<std::string> failure_messages;  ///< "replication r: message"
};

struct RiskReport {
  ExperimentConfig config;
  std::vector<EstimatorRisk> estimators;
  double wall_clock_seconds = 0.0;
  std::size_t threads = 1;

  const EstimatorRisk& at(const std::string& key) const;
};

/// Runs body(i) for i < count on up to `threads` workers. Each index is handled exactly once.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& body);

RiskReport run_risk_study(const ExperimentConfig& config, std::size_t threads = 1);

/// Mean and standard error (sample sd / sqrt(count)) of a sample.
std::pair<double, std::optional<double>> mean_and_error(std::span<const double> values);

struct RatePoint {
  std::size_t n = 0;
  double mean_mise = 0.0;
  std::optional<double> std_error;
  std::size_t replications = 0;
  std::size_t failures = 0;
};

struct RateReport {
  std::string estimator;
  SmoothnessParams smoothness;
  std::vector<RatePoint> points;
  double slope = 0.0;               ///< least-squares slope of log mean MISE against log n
  double theoretical_slope = 0.0;   ///< -2s / (2s + 2 nu + 1)
  double wall_clock_seconds = 0.0;
};

/// Least-squares slope of y against x.
double least_squares_slope(std::span<const double> x, std::span<const double> y);

/// Risk of the known-density hard-threshold estimator over a grid of sample sizes. Uses the
/// first hard_threshold entry of base.estimators when present.
RateReport rate_study(const ExperimentConfig& base, std::span<const std::size_t> n_grid, const SmoothnessParams& sp,
                      std::size_t threads = 1);

}  // namespace shiftmean
