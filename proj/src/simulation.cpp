#include "shiftmean/simulation.hpp"

#include <cmath>
#include <numbers>

#include "shiftmean/errors.hpp"
#include "shiftmean/fft.hpp"

namespace shiftmean {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

const char* const kEstimatorNames[] = {"direct", "procrustean", "hard_threshold", "fn1",
                                       "fn2",    "frechet",     "spectral_cutoff"};

}  // namespace

bool EstimatorSpec::uses_estimated_noise() const {
  if (estimate_noise) return *estimate_noise;
  return name == "fn1" || name == "fn2";
}

void validate(const ExperimentConfig& c) {
  if (!fft::is_power_of_two(c.N) || c.N < 8) throw ParameterError("N: must be a power of two >= 8");
  if (c.n < 2) throw ParameterError("n: at least two curves required");
  if (c.replications < 1) throw ParameterError("replications: must be >= 1");
  if (!(c.noise_sd >= 0.0) || !std::isfinite(c.noise_sd)) throw ParameterError("noise_sd: must be finite and >= 0");
  if (!(c.kappa > 1.0)) throw ParameterError("kappa: must exceed 1");
  if (!(c.rho > 0.0 && c.rho < 1.0)) throw ParameterError("rho: must lie in (0, 1)");
  if (c.max_iters < 1) throw ParameterError("max_iters: must be >= 1");
  const int lmax = max_frequency_for_grid(c.N);
  for (const EstimatorSpec& e : c.estimators) {
    bool known = false;
    for (const char* name : kEstimatorNames) known = known || e.name == name;
    if (!known) throw ParameterError("estimators.name: unknown estimator '" + e.name + "'");
    if (!(e.eta > 0.0)) throw ParameterError("estimators.eta: must be positive");
    if (e.ell0 < 1 || e.ell0 > lmax) throw ParameterError("estimators.ell0: out of range");
    if (e.i_max < 1) throw ParameterError("estimators.i_max: must be >= 1");
    if (e.j0 && *e.j0 < 0) throw ParameterError("estimators.j0: must be >= 0");
    if (e.j0 && e.j1 && *e.j1 < *e.j0) throw ParameterError("estimators.j1: must be >= j0");
    if (e.M && (*e.M < 0 || *e.M > lmax)) throw ParameterError("estimators.M: out of range");
  }
  for (std::size_t a = 0; a < c.estimators.size(); ++a)
    for (std::size_t b = a + 1; b < c.estimators.size(); ++b)
      if (c.estimators[a].key() == c.estimators[b].key())
        throw ParameterError("estimators.label: duplicate key '" + c.estimators[a].key() + "'");
}

double white_noise_level(const ExperimentConfig& config) {
  return config.noise_sd / std::sqrt(static_cast<double>(config.N));
}

Rng replication_rng(std::uint64_t seed, std::uint64_t index) {
  const std::uint64_t h = splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
  return Rng(seq);
}

PeriodicSignal true_signal(const ExperimentConfig& config) {
  return band_limit(test_signal(config.signal, config.N));
}

Dataset simulate(const ExperimentConfig& config, std::uint64_t replication_index) {
  validate(config);
  Rng rng = replication_rng(config.seed, replication_index);
  Dataset d;
  d.truth = true_signal(config);
  d.noise_sd = config.noise_sd;
  d.seed = config.seed;
  d.replication = replication_index;
  d.shifts.resize(config.n);
  for (double& tau : d.shifts) tau = config.density.sample(rng);
  if (config.center_shifts) {
    double mean = 0.0;
    for (double tau : d.shifts) mean += tau;
    mean /= static_cast<double>(config.n);
    for (double& tau : d.shifts) tau -= mean;
  }

  const int lmax = max_frequency_for_grid(config.N);
  const FourierCoeffs theta = to_fourier(d.truth, lmax);
  std::normal_distribution<double> normal(0.0, 1.0);
  d.curves.reserve(config.n);
  for (std::size_t m = 0; m < config.n; ++m) {
    if (d.shifts[m] == 0.0) {
      std::vector<double> y(d.truth.samples().begin(), d.truth.samples().end());
      for (double& v : y) v += config.noise_sd * normal(rng);
      d.curves.emplace_back(std::move(y));
      continue;
    }
    FourierCoeffs shifted(lmax);
    for (int ell = -lmax; ell <= lmax; ++ell)
      shifted[ell] = theta[ell] * std::polar(1.0, -2.0 * std::numbers::pi * ell * d.shifts[m]);
    const PeriodicSignal clean = from_fourier(shifted, config.N);
    std::vector<double> y(clean.samples().begin(), clean.samples().end());
    for (double& v : y) v += config.noise_sd * normal(rng);
    d.curves.emplace_back(std::move(y));
  }
  return d;
}

double mise(const PeriodicSignal& f_hat, const PeriodicSignal& f_true) {
  if (f_hat.size() != f_true.size()) throw ParameterError("mise: grid mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < f_hat.size(); ++i) {
    const double d = f_hat[i] - f_true[i];
    sum += d * d;
  }
  return sum / static_cast<double>(f_hat.size());
}

}  // namespace shiftmean
