#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "sequence_model.hpp"
#include "shiftmean/errors.hpp"
#include "shiftmean/registration.hpp"
#include "shiftmean/signals.hpp"

using namespace shiftmean;
using namespace testing;

namespace {

/// Independent double loop for M_n.
double criterion_loop(const CurveCoeffsMatrix& c, const std::vector<double>& taus, int ell0) {
  const std::size_t n = c.curves();
  double total = 0.0;
  for (std::size_t m = 0; m < n; ++m)
    for (int l = -ell0; l <= ell0; ++l) {
      cplx mean{};
      for (std::size_t q = 0; q < n; ++q) mean += c.at(q, l) * std::polar(1.0, 2 * kPi * l * taus[q]);
      mean /= static_cast<double>(n);
      total += std::norm(c.at(m, l) * std::polar(1.0, 2 * kPi * l * taus[m]) - mean);
    }
  return total / static_cast<double>(n);
}

CurveCoeffsMatrix random_matrix(std::size_t n, int L, std::mt19937_64& rng) {
  CurveCoeffsMatrix c(n, L);
  for (std::size_t m = 0; m < n; ++m) c.set_row(m, random_real_spectrum(L, rng));
  return c;
}

FourierCoeffs heavisine() { return to_fourier(test_signal(SignalName::HeaviSine, 512), 255); }

}  // namespace

TEST_CASE("criterion examples") {
  std::mt19937_64 rng(1);
  const CurveCoeffsMatrix one = random_matrix(1, 5, rng);
  CHECK(criterion_mn(one, std::vector<double>{0.3}, 3) == doctest::Approx(0.0).epsilon(1e-30));

  const std::vector<double> truth = {0.1, -0.05, 0.2, -0.15, 0.0};
  const CurveCoeffsMatrix c = sequence_curves(heavisine(), truth, 0.0, rng);
  CHECK(criterion_mn(c, truth, 3) < 1e-20);

  const CurveCoeffsMatrix r = random_matrix(5, 6, rng);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  std::vector<double> taus(5);
  for (double& t : taus) t = u(rng);
  CHECK(std::abs(criterion_mn(r, taus, 3) - criterion_loop(r, taus, 3)) < 1e-12);
  CHECK(criterion_mn(r, taus, 3) >= 0.0);

  CHECK_THROWS_AS(criterion_mn(r, std::vector<double>(4, 0.0), 3), ParameterError);
  CHECK_THROWS_AS(criterion_mn(r, taus, 7), ParameterError);
}

TEST_CASE("criterion is invariant under a common shift") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  const CurveCoeffsMatrix r = random_matrix(7, 5, rng);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> taus(7);
    for (double& t : taus) t = u(rng);
    std::vector<double> moved = taus;
    const double c = u(rng) * 3.0;
    for (double& t : moved) t += c;
    CHECK(std::abs(criterion_mn(r, taus, 4) - criterion_mn(r, moved, 4)) < 1e-12);
  }
}

TEST_CASE("gradient matches central differences") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.25, 0.25);
  std::uniform_int_distribution<int> nd(2, 10), ld(1, 5);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = static_cast<std::size_t>(nd(rng));
    const int ell0 = ld(rng);
    const CurveCoeffsMatrix c = random_matrix(n, ell0, rng);
    std::vector<double> taus(n);
    for (double& t : taus) t = u(rng);
    const std::vector<double> g = gradient_mn(c, taus, ell0);
    const double h = 1e-6;
    double scale = 0.0;
    for (double v : g) scale = std::max(scale, std::abs(v));
    for (std::size_t m = 0; m < n; ++m) {
      std::vector<double> p = taus, q = taus;
      p[m] += h;
      q[m] -= h;
      const double fd = (criterion_mn(c, p, ell0) - criterion_mn(c, q, ell0)) / (2 * h);
      worst = std::max(worst, std::abs(fd - g[m]) / std::max(scale, 1e-12));
    }
  }
  CHECK(worst < 1e-5);
}

TEST_CASE("gradient at the truth and along the common direction") {
  std::mt19937_64 rng(4);
  const std::vector<double> truth = {0.1, -0.05, 0.2, -0.15, -0.1};
  const CurveCoeffsMatrix c = sequence_curves(heavisine(), truth, 0.0, rng);
  double norm = 0.0;
  for (double v : gradient_mn(c, truth, 3)) norm += v * v;
  CHECK(std::sqrt(norm) < 1e-10);

  const CurveCoeffsMatrix r = random_matrix(6, 4, rng);
  const std::vector<double> taus = {0.1, 0.3, -0.2, 0.05, 0.0, -0.4};
  double directional = 0.0;
  for (double v : gradient_mn(r, taus, 4)) directional += v;
  CHECK(std::abs(directional) < 1e-10);
}

TEST_CASE("descent on identical curves stops at once") {
  const FourierCoeffs theta = heavisine();
  const std::vector<double> zero(6, 0.0);
  std::mt19937_64 rng(5);
  const ShiftEstimate e = estimate_shifts(sequence_curves(theta, zero, 0.0, rng), {});
  for (double t : e.taus) CHECK(t == 0.0);
  CHECK(e.trace.termination == "stationary start");
  CHECK(e.trace.steps.size() == 1);
}

TEST_CASE("descent recovers narrow noiseless shifts and keeps the zero-sum constraint") {
  const FourierCoeffs theta = heavisine();
  const ShiftDensity d = ShiftDensity::uniform_centered(0.1);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    std::mt19937_64 rng(seed);
    const std::vector<double> truth = draw_shifts(d, 20, rng);
    const ShiftEstimate e = estimate_shifts(sequence_curves(theta, truth, 0.0, rng), {});
    CHECK(std::sqrt(centered_shift_error(e.taus, truth)) < 1e-3);
    double sum = 0.0;
    for (double t : e.taus) sum += t;
    CHECK(std::abs(sum) < 1e-12);
    for (std::size_t p = 1; p < e.trace.steps.size(); ++p)
      CHECK(e.trace.steps[p].criterion <= e.trace.steps[p - 1].criterion);
    CHECK(e.trace.steps.back().criterion <= e.trace.steps.front().criterion);
    CHECK(e.trace.outside_support == 0);
    CHECK_FALSE(e.trace.weak_first_harmonic);
  }
}

TEST_CASE("descent flags a vanishing first harmonic") {
  const FourierCoeffs wave = to_fourier(test_signal(SignalName::Wave, 512), 255);
  std::mt19937_64 rng(6);
  const std::vector<double> truth = {0.05, -0.02, 0.01, -0.04};
  const ShiftEstimate e = estimate_shifts(sequence_curves(wave, truth, 0.0, rng), {});
  CHECK(e.trace.weak_first_harmonic);
}

TEST_CASE("descent configuration is validated") {
  std::mt19937_64 rng(7);
  const CurveCoeffsMatrix c = random_matrix(4, 5, rng);
  CHECK_THROWS_AS(estimate_shifts(c, {3, 1.0, 1e-6, 100}), ParameterError);
  CHECK_THROWS_AS(estimate_shifts(c, {3, 2.0, 0.0, 100}), ParameterError);
  CHECK_THROWS_AS(estimate_shifts(c, {3, 2.0, 1e-6, 0}), ParameterError);
  CHECK_THROWS_AS(estimate_shifts(random_matrix(1, 5, rng), {}), ParameterError);
  const ShiftEstimate capped = estimate_shifts(c, {3, 2.0, 1e-300, 2});
  CHECK(capped.trace.termination == "max iterations");
}

TEST_CASE("Frechet mean") {
  const FourierCoeffs theta = heavisine();
  std::mt19937_64 rng(8);
  const std::vector<double> truth = {0.1, -0.05, 0.2, -0.15};
  const CurveCoeffsMatrix c = sequence_curves(theta, truth, 0.0, rng, 512);
  const EstimateResult r = frechet_mean(c, truth, 3);
  CHECK(max_abs_diff(r.f_hat, from_fourier(truncate(theta, 3), 512)) < 1e-10);

  const CurveCoeffsMatrix noisy = sequence_curves(theta, truth, 0.05, rng, 512);
  const EstimateResult z = frechet_mean(noisy, std::vector<double>(4, 0.0), 3);
  CHECK(max_abs_diff(z.f_hat, from_fourier(truncate(sample_mean_coeffs(noisy), 3), 512)) < 1e-12);
  CHECK(z.meta.estimator == "frechet");
}

TEST_CASE("Van Trees bound") {
  FourierCoeffs zero(5);
  const ShiftDensity lap = ShiftDensity::laplace(0.1);
  CHECK(van_trees_bound(zero, 0.3, lap) == doctest::Approx(1.0 / 200.0));

  // spectrum with sum (2 pi l)^2 |theta_l|^2 = 800
  FourierCoeffs t(1);
  const double a = std::sqrt(800.0 / (2.0 * 4.0 * kPi * kPi));
  t[1] = a;
  t[-1] = a;
  CHECK(van_trees_bound(t, 0.1, lap) == doctest::Approx(1.2469e-5).epsilon(1e-4));
  CHECK(van_trees_bound(t, 0.1, lap) == doctest::Approx(0.01 / (800.0 + 2.0)).epsilon(1e-12));

  FourierCoeffs sharper = t;
  sharper[1] *= 2.0;
  sharper[-1] *= 2.0;
  CHECK(van_trees_bound(sharper, 0.1, lap) < van_trees_bound(t, 0.1, lap));

  const FourierCoeffs hs = heavisine();
  CHECK(van_trees_bound(hs, 0.1, lap, 3) > van_trees_bound(hs, 0.1, lap));
  CHECK_THROWS_AS(van_trees_bound(t, 0.1, ShiftDensity::uniform_centered(0.2)), DomainError);
}

TEST_CASE("centered shift error") {
  const std::vector<double> truth = {0.3, 0.1, 0.2};
  const std::vector<double> est = {0.1, -0.1, 0.0};
  CHECK(centered_shift_error(est, truth) < 1e-30);
  CHECK(centered_shift_error(std::vector<double>{0.1, 0.0, -0.1}, std::vector<double>{0.0, 0.0, 0.0}) ==
        doctest::Approx(0.02 / 3.0));
}
