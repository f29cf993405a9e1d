#include "shiftmean/risk.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "shiftmean/baselines.hpp"
#include "shiftmean/errors.hpp"

namespace shiftmean {

EstimationContext::EstimationContext(const ExperimentConfig& config, std::span<const PeriodicSignal> curves)
    : config_(config), curves_(curves) {
  if (curves.size() < 2) throw ParameterError("at least two curves required");
  for (const PeriodicSignal& c : curves)
    if (c.size() != curves.front().size()) throw ParameterError("curves must share one grid");
  config_.n = curves.size();
  config_.N = curves.front().size();
}

const CurveCoeffsMatrix& EstimationContext::coeffs() {
  if (!coeffs_) coeffs_ = curve_coeffs(curves_, max_frequency_for_grid(config_.N));
  return *coeffs_;
}

const ShiftEstimate& EstimationContext::shifts(int ell0) {
  auto it = shifts_.find(ell0);
  if (it == shifts_.end()) {
    const DescentConfig dc{ell0, config_.kappa, config_.rho, config_.max_iters};
    it = shifts_.emplace(ell0, estimate_shifts(coeffs(), dc)).first;
  }
  return it->second;
}

double EstimationContext::estimated_eps() {
  if (!eps_hat_) {
    const int finest = max_level_for_grid(config_.N);
    eps_hat_ = std::sqrt(estimate_noise_level(coeffs(), {finest, finest, 3}));
  }
  return *eps_hat_;
}

WaveletBasisSpec resolved_levels(const EstimatorSpec& spec, const ExperimentConfig& config) {
  WaveletBasisSpec levels = default_levels(config.n, config.density.nu(), config.N, config.level_rule);
  if (spec.j0) levels.j0 = *spec.j0;
  if (spec.j1) levels.j1 = *spec.j1;
  if (levels.j1 < levels.j0) throw ParameterError("estimators.j1: must be >= j0");
  return levels;
}

EstimateResult run_estimator(const EstimatorSpec& spec, EstimationContext& ctx) {
  const ExperimentConfig& cfg = ctx.config();
  const std::size_t N = cfg.N;
  if (spec.name == "direct") {
    EstimateResult r;
    r.f_hat = direct_mean(ctx.curves());
    r.meta.estimator = "direct";
    r.meta.n = cfg.n;
    return r;
  }
  if (spec.name == "procrustean") {
    EstimateResult r;
    r.f_hat = procrustean_mean(ctx.curves(), {spec.i_max, spec.refine}).mean;
    r.meta.estimator = "procrustean";
    r.meta.n = cfg.n;
    return r;
  }
  if (spec.name == "frechet") return frechet_mean(ctx.coeffs(), ctx.shifts(spec.ell0).taus, spec.ell0);

  const double eps = spec.uses_estimated_noise() ? ctx.estimated_eps() : ctx.known_eps();
  const bool known = spec.known_g && spec.name != "fn1" && spec.name != "fn2";
  if (spec.name == "spectral_cutoff") {
    const int cutoff = spec.M ? *spec.M : default_cutoff(cfg.n, {1.0, cfg.density.nu()});
    const Eigenvalues eig = known ? known_eigenvalues(cfg.density, ctx.coeffs().max_freq())
                                  : estimated_eigenvalues(ctx.shifts(spec.ell0).taus, ctx.coeffs().max_freq());
    const Deconvolution d = deconvolve(sample_mean_coeffs(ctx.coeffs()), eig.gamma, eig.floor);
    EstimateResult r = spectral_cutoff(d.theta, cutoff, N);
    r.meta.n = cfg.n;
    r.meta.eps = eps;
    r.meta.zeroed_freqs = d.zeroed;
    if (!known) r.meta.ell0 = spec.ell0;
    return r;
  }

  const WaveletBasisSpec levels = resolved_levels(spec, cfg);
  if (spec.name == "hard_threshold" && known) {
    EstimateResult r = hard_threshold_estimate(ctx.coeffs(), cfg.density, eps,
                                               {spec.eta, SigmaSource::KnownDensity}, levels);
    r.meta.estimator = "hard_threshold";
    return r;
  }
  const ThresholdPolicy policy{spec.eta, SigmaSource::EstimatedGamma};
  const std::vector<double>& taus = ctx.shifts(spec.ell0).taus;
  if (spec.name == "fn2") {
    EstimateResult r = estimate_fn2(ctx.coeffs(), taus, eps, policy, levels);
    r.meta.ell0 = spec.ell0;
    return r;
  }
  EstimateResult r = estimate_fn1(ctx.coeffs(), taus, eps, policy, levels, spec.ell0);
  r.meta.estimator = spec.name;
  return r;
}

const EstimatorRisk& RiskReport::at(const std::string& key) const {
  for (const EstimatorRisk& e : estimators)
    if (e.key == key) return e;
  throw ParameterError("no estimator '" + key + "' in report");
}

void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& body) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::pair<double, std::optional<double>> mean_and_error(std::span<const double> values) {
  if (values.empty()) return {std::numeric_limits<double>::quiet_NaN(), std::nullopt};
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) return {mean, std::nullopt};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  return {mean, sd / std::sqrt(static_cast<double>(values.size()))};
}

RiskReport run_risk_study(const ExperimentConfig& config, std::size_t threads) {
  validate(config);
  if (config.estimators.empty()) throw ParameterError("estimators: at least one estimator required");
  const auto start = std::chrono::steady_clock::now();
  const std::size_t reps = config.replications;
  const std::size_t k = config.estimators.size();
  std::vector<std::vector<std::optional<double>>> values(reps, std::vector<std::optional<double>>(k));
  std::vector<std::vector<std::string>> messages(reps, std::vector<std::string>(k));

  parallel_for(reps, threads, [&](std::size_t r) {
    const Dataset data = simulate(config, r);
    EstimationContext ctx(config, data.curves);
    for (std::size_t e = 0; e < k; ++e) {
      try {
        values[r][e] = mise(run_estimator(config.estimators[e], ctx).f_hat, data.truth);
      } catch (const ParameterError&) {
        throw;
      } catch (const std::exception& ex) {
        messages[r][e] = ex.what();
      }
    }
  });

  RiskReport report;
  report.config = config;
  report.threads = std::max<std::size_t>(1, threads);
  for (std::size_t e = 0; e < k; ++e) {
    EstimatorRisk er;
    er.key = config.estimators[e].key();
    er.name = config.estimators[e].name;
    std::vector<double> ok;
    for (std::size_t r = 0; r < reps; ++r) {
      er.values.push_back(values[r][e]);
      if (values[r][e]) {
        ok.push_back(*values[r][e]);
      } else {
        ++er.failures;
        er.failure_messages.push_back("replication " + std::to_string(r) + ": " + messages[r][e]);
      }
    }
    std::tie(er.mean_mise, er.std_error) = mean_and_error(ok);
    er.replications = ok.size();
    report.estimators.push_back(std::move(er));
  }
  report.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

double least_squares_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ParameterError("slope needs at least two paired points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw ParameterError("slope needs distinct x values");
  return sxy / sxx;
}

RateReport rate_study(const ExperimentConfig& base, std::span<const std::size_t> n_grid, const SmoothnessParams& sp,
                      std::size_t threads) {
  if (n_grid.size() < 3) throw ParameterError("n_grid: at least three sample sizes required");
  const auto [lo, hi] = std::minmax_element(n_grid.begin(), n_grid.end());
  if (*hi < 10 * *lo) throw ParameterError("n_grid: must span at least one decade");
  if (!(sp.s > 0.0) || sp.nu < 0.0) throw ParameterError("smoothness: s must be positive and nu non-negative");
  const auto start = std::chrono::steady_clock::now();

  EstimatorSpec est;
  est.name = "hard_threshold";
  for (const EstimatorSpec& e : base.estimators)
    if (e.name == "hard_threshold" && e.known_g) {
      est = e;
      break;
    }

  RateReport out;
  out.estimator = est.key();
  out.smoothness = sp;
  out.theoretical_slope = -2.0 * sp.s / (2.0 * sp.s + 2.0 * sp.nu + 1.0);
  std::vector<double> lx, ly;
  for (std::size_t n : n_grid) {
    ExperimentConfig cfg = base;
    cfg.n = n;
    cfg.estimators = {est};
    const RiskReport rr = run_risk_study(cfg, threads);
    const EstimatorRisk& er = rr.estimators.front();
    out.points.push_back({n, er.mean_mise, er.std_error, er.replications, er.failures});
    if (er.replications == 0 || !(er.mean_mise > 0.0)) throw NumericalError("rate study: no usable risk at n = " + std::to_string(n));
    lx.push_back(std::log(static_cast<double>(n)));
    ly.push_back(std::log(er.mean_mise));
  }
  out.slope = least_squares_slope(lx, ly);
  out.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace shiftmean
