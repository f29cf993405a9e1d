#include "shiftmean/registration.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "shiftmean/errors.hpp"

namespace shiftmean {
namespace {

constexpr double kPi = std::numbers::pi;

cplx unit_phase(double angle) { return {std::cos(angle), std::sin(angle)}; }

void check_dims(const CurveCoeffsMatrix& curves, std::span<const double> taus, int ell0) {
  if (taus.size() != curves.curves())
    throw ParameterError("shift vector has " + std::to_string(taus.size()) + " entries for " +
                         std::to_string(curves.curves()) + " curves");
  if (ell0 < 0 || ell0 > curves.max_freq()) throw ParameterError("ell0 outside the available spectrum");
}

// Realigned coefficients a_{m,l} = c_{m,l} e^{2 pi i l tau_m} for 1 <= l <= ell0
// (negative frequencies are conjugates for real curves but are kept explicit) and
// their mean over m.
struct Aligned {
  std::size_t n;
  int ell0;
  std::vector<cplx> a;     // n x (2 ell0 + 1)
  std::vector<cplx> mean;  // 2 ell0 + 1
  cplx& at(std::size_t m, int ell) { return a[m * static_cast<std::size_t>(2 * ell0 + 1) + static_cast<std::size_t>(ell + ell0)]; }
};

Aligned align(const CurveCoeffsMatrix& curves, std::span<const double> taus, int ell0) {
  const std::size_t n = curves.curves();
  const auto width = static_cast<std::size_t>(2 * ell0 + 1);
  Aligned al{n, ell0, std::vector<cplx>(n * width), std::vector<cplx>(width)};
  for (std::size_t m = 0; m < n; ++m) {
    const cplx step = unit_phase(2.0 * kPi * taus[m]);
    cplx phase = 1.0;
    for (int ell = 0; ell <= ell0; ++ell) {
      al.at(m, ell) = curves.at(m, ell) * phase;
      if (ell > 0) al.at(m, -ell) = curves.at(m, -ell) * std::conj(phase);
      phase *= step;
    }
    for (std::size_t c = 0; c < width; ++c) al.mean[c] += al.a[m * width + c];
  }
  for (auto& v : al.mean) v /= static_cast<double>(n);
  return al;
}

}  // namespace

double criterion_mn(const CurveCoeffsMatrix& curves, std::span<const double> taus, int ell0) {
  check_dims(curves, taus, ell0);
  Aligned al = align(curves, taus, ell0);
  const auto width = static_cast<std::size_t>(2 * ell0 + 1);
  double sum = 0.0;
  for (std::size_t m = 0; m < al.n; ++m)
    for (std::size_t c = 0; c < width; ++c) sum += std::norm(al.a[m * width + c] - al.mean[c]);
  return sum / static_cast<double>(al.n);
}

std::vector<double> gradient_mn(const CurveCoeffsMatrix& curves, std::span<const double> taus, int ell0) {
  check_dims(curves, taus, ell0);
  Aligned al = align(curves, taus, ell0);
  const double scale = -2.0 / static_cast<double>(al.n);
  std::vector<double> grad(al.n, 0.0);
  for (std::size_t m = 0; m < al.n; ++m) {
    double g = 0.0;
    for (int ell = -ell0; ell <= ell0; ++ell) {
      const cplx term = cplx(0.0, 2.0 * kPi * ell) * al.at(m, ell) *
                        std::conj(al.mean[static_cast<std::size_t>(ell + ell0)]);
      g += term.real();
    }
    grad[m] = scale * g;
  }
  return grad;
}

ShiftEstimate estimate_shifts(const CurveCoeffsMatrix& curves, const DescentConfig& config) {
  const std::size_t n = curves.curves();
  if (n < 2) throw ParameterError("shift estimation needs at least two curves");
  if (!(config.kappa > 1.0)) throw ParameterError("kappa must exceed 1");
  if (!(config.rho > 0.0)) throw ParameterError("rho must be positive");
  if (config.max_iters < 1) throw ParameterError("max_iters must be at least 1");
  check_dims(curves, std::vector<double>(n, 0.0), config.ell0);

  ShiftEstimate out{std::vector<double>(n, 0.0), {}};
  DescentTrace& trace = out.trace;
  if (curves.max_freq() >= 1) {
    double first = 0.0;
    for (std::size_t m = 0; m < n; ++m) first += std::abs(curves.at(m, 1));
    trace.weak_first_harmonic = first / static_cast<double>(n) < 1e-8;
  }

  auto norm = [](const std::vector<double>& v) {
    return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
  };
  auto project = [](std::vector<double>& t) {
    t[0] = -std::accumulate(t.begin() + 1, t.end(), 0.0);
  };

  std::vector<double> tau(n, 0.0);
  std::vector<double> grad = gradient_mn(curves, tau, config.ell0);
  double value = criterion_mn(curves, tau, config.ell0);
  double gnorm = norm(grad);
  trace.steps.push_back({0, value, 0.0, gnorm});
  // a gradient at round-off level of its natural scale 2 pi ell0 (1/n) sum |c|^2 counts as zero
  double energy = 0.0;
  for (std::size_t m = 0; m < n; ++m)
    for (int ell = -config.ell0; ell <= config.ell0; ++ell) energy += std::norm(curves.at(m, ell));
  const double grad_scale = 2.0 * kPi * config.ell0 * energy / static_cast<double>(n);
  if (!(gnorm > 1e-13 * grad_scale)) {
    trace.termination = "stationary start";
    trace.taus = tau;
    return out;
  }

  const double delta0 = 1.0 / gnorm;
  double delta = delta0;
  double first_value = 0.0;  // M(1), value after the first accepted step
  trace.termination = "max iterations";
  std::vector<double> proposal(n);
  for (int p = 0; p < config.max_iters; ++p) {
    double next = 0.0;
    int shrinks = 0;
    for (;;) {
      for (std::size_t m = 0; m < n; ++m) proposal[m] = tau[m] - delta * grad[m];
      project(proposal);
      next = criterion_mn(curves, proposal, config.ell0);
      if (next < value) break;
      delta /= config.kappa;
      if (++shrinks > 200 || delta < 1e-300) {
        trace.termination = "step underflow";
        break;
      }
    }
    if (trace.termination == "step underflow") break;
    const double previous = value;
    tau = proposal;
    value = next;
    if (p == 0) first_value = value;
    grad = gradient_mn(curves, tau, config.ell0);
    gnorm = norm(grad);
    trace.steps.push_back({p + 1, value, delta, gnorm});
    if (!(previous - value >= config.rho * (first_value - value)) || gnorm == 0.0) {
      trace.termination = "converged";
      break;
    }
    delta = std::min(2.0 * delta, delta0);
  }
  for (double t : tau)
    if (std::abs(t) > 0.25) ++trace.outside_support;
  trace.taus = tau;
  out.taus = std::move(tau);
  return out;
}

EstimateResult frechet_mean(const CurveCoeffsMatrix& curves, std::span<const double> taus, int ell0) {
  check_dims(curves, taus, ell0);
  Aligned al = align(curves, taus, ell0);
  FourierCoeffs theta(ell0);
  for (int ell = -ell0; ell <= ell0; ++ell) theta[ell] = al.mean[static_cast<std::size_t>(ell + ell0)];
  EstimateResult r;
  r.theta_hat = theta;
  r.f_hat = from_fourier(theta, curves.grid_size());
  r.meta.estimator = "frechet";
  r.meta.n = curves.curves();
  r.meta.ell0 = ell0;
  return r;
}

double van_trees_bound(const FourierCoeffs& theta, double eps, const ShiftDensity& density, std::optional<int> ell0) {
  const double fisher = density.fisher_info();
  const int limit = ell0 ? std::min(*ell0, theta.max_freq()) : theta.max_freq();
  double energy = 0.0;
  for (int ell = -limit; ell <= limit; ++ell) {
    const double w = 2.0 * kPi * ell;
    energy += w * w * std::norm(theta[ell]);
  }
  const double e2 = eps * eps;
  if (e2 == 0.0 && energy == 0.0) throw DomainError("van Trees bound undefined for zero signal and zero noise");
  if (energy == 0.0) return 1.0 / fisher;
  return e2 / (energy + e2 * fisher);
}

double centered_shift_error(std::span<const double> estimate, std::span<const double> truth) {
  if (estimate.size() != truth.size() || truth.empty()) throw ParameterError("shift vectors differ in length");
  const double mean = std::accumulate(truth.begin(), truth.end(), 0.0) / static_cast<double>(truth.size());
  double sum = 0.0;
  for (std::size_t m = 0; m < truth.size(); ++m) {
    const double d = estimate[m] - (truth[m] - mean);
    sum += d * d;
  }
  return sum / static_cast<double>(truth.size());
}

}  // namespace shiftmean
