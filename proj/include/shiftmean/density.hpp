#pragma once

#include <complex>
#include <optional>
#include <random>
#include <string>

#include "shiftmean/fourier.hpp"

namespace shiftmean {

using Rng = std::mt19937_64;

enum class DensityKind { Dirac, UniformCentered, Laplace, TruncatedCosine };

/// Distribution of the random shifts tau_m.
///
/// Laplace(sigma) has density exp(-sqrt(2)|x|/sigma)/(sqrt(2) sigma), i.e. variance
/// sigma^2; with `truncated` set it is restricted to [-1/4, 1/4] and renormalized.
/// TruncatedCosine(a) has density cos^2(pi x / (2a)) / a on [-a, a]; it vanishes at
/// the support boundary and therefore has finite Fisher information.
class ShiftDensity {
 public:
  static ShiftDensity dirac();
  static ShiftDensity uniform_centered(double half_width);
  static ShiftDensity laplace(double sigma, bool truncated = false);
  static ShiftDensity truncated_cosine(double half_width);

  DensityKind kind() const { return kind_; }
  /// Half width for the uniform and cosine kinds, sigma for Laplace, 0 for Dirac.
  double parameter() const { return param_; }
  bool truncated() const { return truncated_; }
  std::string name() const;

  /// gamma_l = E exp(-2 pi i l tau).
  cplx gamma(int ell) const;
  /// gamma_l for l = -L..L.
  FourierCoeffs eigenvalues(int max_freq) const;

  double sample(Rng& rng) const;

  /// Density on the real line. Dirac has none (DomainError).
  double pdf(double x) const;
  /// G(x) = sum_k g(x + k).
  double periodized(double x) const;

  /// int (d/dtau log g)^2 g dtau; DomainError for kinds where it is undefined.
  double fisher_info() const;
  /// Polynomial decay order of |gamma_l|.
  double nu() const;
  double variance() const;

  bool operator==(const ShiftDensity&) const = default;

 private:
  ShiftDensity(DensityKind kind, double param, bool truncated) : kind_(kind), param_(param), truncated_(truncated) {}

  DensityKind kind_ = DensityKind::Dirac;
  double param_ = 0.0;
  bool truncated_ = false;
};

inline cplx gamma(const ShiftDensity& density, int ell) { return density.gamma(ell); }
inline double periodized_density(const ShiftDensity& density, double x) { return density.periodized(x); }

}  // namespace shiftmean
