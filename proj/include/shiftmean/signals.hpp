#pragma once

#include <string>

#include "shiftmean/fourier.hpp"

namespace shiftmean {

enum class SignalName { Wave, HeaviSine, Blocks, Bumps };

SignalName parse_signal(const std::string& name);
std::string to_string(SignalName name);

/// Raw test function sampled at x_i = i/N, before normalization.
///   Wave:      0.5 + 0.2 cos(4 pi x) + 0.1 cos(24 pi x)
///   HeaviSine: 4 sin(4 pi x) - sgn(x - 0.3) - sgn(0.72 - x)
///   Blocks:    sum_j h_j (1 + sgn(x - p_j)) / 2
///   Bumps:     sum_j h_j (1 + |x - p_j| / w_j)^-4
PeriodicSignal raw_test_signal(SignalName name, std::size_t grid_size);

/// raw_test_signal rescaled to unit grid L2 norm.
PeriodicSignal test_signal(SignalName name, std::size_t grid_size);

/// Removes the Nyquist bin so every frequency of the signal is below N/2.
PeriodicSignal band_limit(const PeriodicSignal& signal);

}  // namespace shiftmean
