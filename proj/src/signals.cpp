#include "shiftmean/signals.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "shiftmean/errors.hpp"
#include "shiftmean/fft.hpp"

namespace shiftmean {
namespace {

constexpr double kPi = std::numbers::pi;

// Breakpoint tables of the Blocks and Bumps signals.
constexpr std::array<double, 11> kPositions = {.1, .13, .15, .23, .25, .40, .44, .65, .76, .78, .81};
constexpr std::array<double, 11> kBlockHeights = {4, -5, 3, -4, 5, -4.2, 2.1, 4.3, -3.1, 2.1, -4.2};
constexpr std::array<double, 11> kBumpHeights = {4, 5, 3, 4, 5, 4.2, 2.1, 4.3, 3.1, 5.1, 4.2};
constexpr std::array<double, 11> kBumpWidths = {.005, .005, .006, .01, .01, .03, .01, .01, .005, .008, .005};

double sgn(double x) { return static_cast<double>((x > 0.0) - (x < 0.0)); }

double evaluate(SignalName name, double x) {
  switch (name) {
    case SignalName::Wave: return 0.5 + 0.2 * std::cos(4.0 * kPi * x) + 0.1 * std::cos(24.0 * kPi * x);
    case SignalName::HeaviSine: return 4.0 * std::sin(4.0 * kPi * x) - sgn(x - 0.3) - sgn(0.72 - x);
    case SignalName::Blocks: {
      double v = 0.0;
      for (std::size_t j = 0; j < kPositions.size(); ++j) v += kBlockHeights[j] * (1.0 + sgn(x - kPositions[j])) / 2.0;
      return v;
    }
    case SignalName::Bumps: {
      double v = 0.0;
      for (std::size_t j = 0; j < kPositions.size(); ++j)
        v += kBumpHeights[j] * std::pow(1.0 + std::abs(x - kPositions[j]) / kBumpWidths[j], -4.0);
      return v;
    }
  }
  return 0.0;
}

}  // namespace

SignalName parse_signal(const std::string& name) {
  if (name == "Wave" || name == "wave") return SignalName::Wave;
  if (name == "HeaviSine" || name == "heavisine") return SignalName::HeaviSine;
  if (name == "Blocks" || name == "blocks") return SignalName::Blocks;
  if (name == "Bumps" || name == "bumps") return SignalName::Bumps;
  throw ParameterError("unknown test signal '" + name + "'");
}

std::string to_string(SignalName name) {
  switch (name) {
    case SignalName::Wave: return "Wave";
    case SignalName::HeaviSine: return "HeaviSine";
    case SignalName::Blocks: return "Blocks";
    case SignalName::Bumps: return "Bumps";
  }
  return "unknown";
}

PeriodicSignal raw_test_signal(SignalName name, std::size_t grid_size) {
  if (!fft::is_power_of_two(grid_size) || grid_size < 8) throw ParameterError("grid size must be a power of two >= 8");
  std::vector<double> v(grid_size);
  for (std::size_t i = 0; i < grid_size; ++i) v[i] = evaluate(name, static_cast<double>(i) / static_cast<double>(grid_size));
  return PeriodicSignal(std::move(v));
}

PeriodicSignal test_signal(SignalName name, std::size_t grid_size) {
  const PeriodicSignal raw = raw_test_signal(name, grid_size);
  const double scale = 1.0 / std::sqrt(raw.norm_squared());
  std::vector<double> v(raw.samples().begin(), raw.samples().end());
  for (double& x : v) x *= scale;
  return PeriodicSignal(std::move(v));
}

PeriodicSignal band_limit(const PeriodicSignal& signal) {
  return from_fourier(to_fourier(signal, max_frequency_for_grid(signal.size())), signal.size());
}

}  // namespace shiftmean
