#include "shiftmean/density.hpp"

#include <cmath>
#include <numbers>

#include "shiftmean/errors.hpp"

namespace shiftmean {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLaplaceTruncation = 0.25;

double sinc(double x) { return std::abs(x) < 1e-12 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

}  // namespace

ShiftDensity ShiftDensity::dirac() { return {DensityKind::Dirac, 0.0, false}; }

ShiftDensity ShiftDensity::uniform_centered(double half_width) {
  if (!(half_width > 0.0)) throw ParameterError("uniform half width must be positive");
  return {DensityKind::UniformCentered, half_width, false};
}

ShiftDensity ShiftDensity::laplace(double sigma, bool truncated) {
  if (!(sigma > 0.0)) throw ParameterError("laplace sigma must be positive");
  return {DensityKind::Laplace, sigma, truncated};
}

ShiftDensity ShiftDensity::truncated_cosine(double half_width) {
  if (!(half_width > 0.0)) throw ParameterError("cosine half width must be positive");
  return {DensityKind::TruncatedCosine, half_width, false};
}

std::string ShiftDensity::name() const {
  switch (kind_) {
    case DensityKind::Dirac: return "dirac";
    case DensityKind::UniformCentered: return "uniform";
    case DensityKind::Laplace: return "laplace";
    case DensityKind::TruncatedCosine: return "cosine";
  }
  return "unknown";
}

cplx ShiftDensity::gamma(int ell) const {
  if (ell == 0) return 1.0;
  const double omega = 2.0 * kPi * ell;
  switch (kind_) {
    case DensityKind::Dirac: return 1.0;
    case DensityKind::UniformCentered: return sinc(omega * param_);
    case DensityKind::Laplace: {
      if (!truncated_) return 1.0 / (1.0 + 2.0 * param_ * param_ * kPi * kPi * ell * ell);
      // lambda/(2) exp(-lambda|x|) on [-b, b], renormalized
      const double lambda = std::numbers::sqrt2 / param_;
      const double b = kLaplaceTruncation;
      const double tail = std::exp(-lambda * b);
      const double num = lambda / (lambda * lambda + omega * omega) *
                         (lambda - tail * (lambda * std::cos(omega * b) - omega * std::sin(omega * b)));
      return num / (1.0 - tail);
    }
    case DensityKind::TruncatedCosine: {
      const double a = param_;
      const double p = kPi / a;
      if (std::abs(std::abs(omega) - p) < 1e-9 * p) return 0.5;
      return sinc(omega * a) * p * p / (p * p - omega * omega);
    }
  }
  return 1.0;
}

FourierCoeffs ShiftDensity::eigenvalues(int max_freq) const {
  FourierCoeffs out(max_freq);
  for (int ell = -max_freq; ell <= max_freq; ++ell) out[ell] = gamma(ell);
  return out;
}

double ShiftDensity::sample(Rng& rng) const {
  switch (kind_) {
    case DensityKind::Dirac: return 0.0;
    case DensityKind::UniformCentered: return std::uniform_real_distribution<double>(-param_, param_)(rng);
    case DensityKind::Laplace: {
      const double scale = param_ / std::numbers::sqrt2;
      std::exponential_distribution<double> expo(1.0 / scale);
      std::uniform_real_distribution<double> coin(0.0, 1.0);
      for (;;) {
        const double magnitude = expo(rng);
        const double x = coin(rng) < 0.5 ? -magnitude : magnitude;
        if (!truncated_ || std::abs(x) <= kLaplaceTruncation) return x;
      }
    }
    case DensityKind::TruncatedCosine: {
      std::uniform_real_distribution<double> u(0.0, 1.0);
      for (;;) {
        const double x = param_ * (2.0 * u(rng) - 1.0);
        const double c = std::cos(kPi * x / (2.0 * param_));
        if (u(rng) <= c * c) return x;
      }
    }
  }
  return 0.0;
}

double ShiftDensity::pdf(double x) const {
  switch (kind_) {
    case DensityKind::Dirac: throw DomainError("dirac shift distribution has no density");
    case DensityKind::UniformCentered: return std::abs(x) <= param_ ? 0.5 / param_ : 0.0;
    case DensityKind::Laplace: {
      const double lambda = std::numbers::sqrt2 / param_;
      if (!truncated_) return 0.5 * lambda * std::exp(-lambda * std::abs(x));
      if (std::abs(x) > kLaplaceTruncation) return 0.0;
      return 0.5 * lambda * std::exp(-lambda * std::abs(x)) / (1.0 - std::exp(-lambda * kLaplaceTruncation));
    }
    case DensityKind::TruncatedCosine: {
      if (std::abs(x) > param_) return 0.0;
      const double c = std::cos(kPi * x / (2.0 * param_));
      return c * c / param_;
    }
  }
  return 0.0;
}

double ShiftDensity::periodized(double x) const {
  if (kind_ == DensityKind::Laplace && !truncated_) {
    // tail mass of the terms beyond |k| is below exp(-lambda (|k| - 1))
    const double lambda = std::numbers::sqrt2 / param_;
    double sum = pdf(x);
    for (int k = 1;; ++k) {
      sum += pdf(x + k) + pdf(x - k);
      if (std::exp(-lambda * (k - 1.0)) < 1e-12) break;
    }
    return sum;
  }
  const double reach = kind_ == DensityKind::Laplace ? kLaplaceTruncation : param_;
  double sum = 0.0;
  const int lo = static_cast<int>(std::floor(-reach - x)) - 1;
  const int hi = static_cast<int>(std::ceil(reach - x)) + 1;
  for (int k = lo; k <= hi; ++k) sum += pdf(x + k);
  return sum;
}

double ShiftDensity::fisher_info() const {
  switch (kind_) {
    case DensityKind::Laplace: return 2.0 / (param_ * param_);
    case DensityKind::TruncatedCosine: return kPi * kPi / (param_ * param_);
    case DensityKind::Dirac: throw DomainError("dirac shift distribution has no Fisher information");
    case DensityKind::UniformCentered:
      throw DomainError("uniform shift density does not vanish at its support boundary; Fisher information undefined");
  }
  return 0.0;
}

double ShiftDensity::nu() const {
  switch (kind_) {
    case DensityKind::Dirac: return 0.0;
    case DensityKind::UniformCentered: return 1.0;
    case DensityKind::Laplace: return truncated_ ? 1.0 : 2.0;
    case DensityKind::TruncatedCosine: return 3.0;
  }
  return 0.0;
}

double ShiftDensity::variance() const {
  switch (kind_) {
    case DensityKind::Dirac: return 0.0;
    case DensityKind::UniformCentered: return param_ * param_ / 3.0;
    case DensityKind::Laplace: {
      if (!truncated_) return param_ * param_;
      const double lambda = std::numbers::sqrt2 / param_;
      const double b = kLaplaceTruncation;
      const double tail = std::exp(-lambda * b);
      const double second = 2.0 / (lambda * lambda) - tail * (b * b + 2.0 * b / lambda + 2.0 / (lambda * lambda));
      return second / (1.0 - tail);
    }
    case DensityKind::TruncatedCosine: return param_ * param_ * (1.0 / 3.0 - 2.0 / (kPi * kPi));
  }
  return 0.0;
}

}  // namespace shiftmean
