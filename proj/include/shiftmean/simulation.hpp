#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shiftmean/density.hpp"
#include "shiftmean/estimators.hpp"
#include "shiftmean/fourier.hpp"
#include "shiftmean/signals.hpp"

namespace shiftmean {

/// One estimator entry of an experiment. Unset optionals fall back to defaults
/// resolved at run time (see resolved_* helpers).
struct EstimatorSpec {
  std::string name;   ///< direct, procrustean, hard_threshold, fn1, fn2, frechet, spectral_cutoff
  std::string label;  ///< report key; defaults to name
  double eta = 1.5;
  int ell0 = 3;
  std::optional<int> j0;
  std::optional<int> j1;
  std::optional<int> M;  ///< spectral cutoff frequency
  bool known_g = true;   ///< eigenvalues from the true density rather than from estimated shifts
  std::optional<bool> estimate_noise;  ///< default: true for fn1/fn2, false otherwise
  int i_max = 3;
  bool refine = true;

  std::string key() const { return label.empty() ? name : label; }
  bool uses_estimated_noise() const;
  bool operator==(const EstimatorSpec&) const = default;
};

struct ExperimentConfig {
  SignalName signal = SignalName::HeaviSine;
  std::size_t n = 200;
  std::size_t N = 512;
  ShiftDensity density = ShiftDensity::laplace(0.1);
  double noise_sd = 1.0 / 7.0;
  std::vector<EstimatorSpec> estimators;
  std::size_t replications = 1;
  std::uint64_t seed = 1;
  /// Subtract the sample mean from the drawn shifts so that the truth satisfies
  /// the zero-sum identifiability constraint.
  bool center_shifts = false;
  LevelRule level_rule = LevelRule::GridCeiling;
  /// Shift-estimation settings shared by fn1, fn2 and frechet.
  double kappa = 2.0;
  double rho = 1e-6;
  int max_iters = 500;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Throws ParameterError naming the offending field.
void validate(const ExperimentConfig& config);

/// White-noise level of the Fourier coefficients, noise_sd / sqrt(N).
double white_noise_level(const ExperimentConfig& config);

/// Generator for one replication, derived from (seed, index) only.
Rng replication_rng(std::uint64_t seed, std::uint64_t index);

struct Dataset {
  std::vector<PeriodicSignal> curves;
  std::vector<double> shifts;
  PeriodicSignal truth;
  double noise_sd = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t replication = 0;
};

/// The mean pattern used by simulate: the normalized test signal without its Nyquist bin.
PeriodicSignal true_signal(const ExperimentConfig& config);

Dataset simulate(const ExperimentConfig& config, std::uint64_t replication_index);

/// (1/N) sum_i (f_hat[i] - f_true[i])^2.
double mise(const PeriodicSignal& f_hat, const PeriodicSignal& f_true);

}  // namespace shiftmean
