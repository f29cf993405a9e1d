#pragma once

#include <span>
#include <vector>

#include "shiftmean/fourier.hpp"

namespace shiftmean {

struct ProcrustesConfig {
  int i_max = 3;
  bool refine = true;  ///< parabolic sub-grid refinement of each shift
};

struct ProcrustesResult {
  PeriodicSignal mean;
  std::vector<double> shifts;  ///< tau_m with Y_m(x + tau_m) aligned to the reference
  double residual = 0.0;       ///< sum_m ||Y_m(. + tau_m) - reference||^2 against the final reference
};

/// f(. - tau), exact for band-limited signals.
PeriodicSignal cyclic_shift(const PeriodicSignal& signal, double tau);

/// Pointwise average of the curves.
PeriodicSignal direct_mean(std::span<const PeriodicSignal> curves);

/// Alternating alignment to the current reference and averaging, starting from the direct mean.
ProcrustesResult procrustean_mean(std::span<const PeriodicSignal> curves, const ProcrustesConfig& config = {});

/// Shift tau (in (-1/2, 1/2]) maximizing <Y(. + tau), reference>, by cross-correlation over all N
/// offsets, optionally refined by a 3-point parabola.
double best_alignment(const PeriodicSignal& curve, const PeriodicSignal& reference, bool refine);

}  // namespace shiftmean
