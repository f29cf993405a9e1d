// Acceptance suite: one PASS/FAIL line per criterion.
// Usage: acceptance [--known-failure ID]... [path-to-shiftmean-cli]
// Exit status is nonzero when the set of failing criteria differs from the declared known failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <set>
#include <thread>
#include <unistd.h>

#include "sequence_model.hpp"
#include "shiftmean/io.hpp"
#include "shiftmean/meyer.hpp"
#include "shiftmean/risk.hpp"

using namespace shiftmean;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::size_t workers() { return std::max(1u, std::thread::hardware_concurrency()); }

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(4);
  s << v;
  return s.str();
}

std::set<int> failed;

void run(int id, const std::string& title, double budget_seconds, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = budget_seconds <= 0.0 || secs < budget_seconds;
  const bool pass = o.pass && in_time;
  if (!pass) failed.insert(id);
  std::cout << (pass ? "PASS" : "FAIL") << "  [" << id << "] " << title << ": " << o.detail << " (" << fmt(secs)
            << " s" << (in_time ? "" : ", over budget " + fmt(budget_seconds) + " s") << ")" << std::endl;
}

EstimatorSpec spec(const std::string& name) {
  EstimatorSpec e;
  e.name = name;
  return e;
}

Outcome meyer_basis() {
  const std::size_t N = 1024;
  const WaveletBasisSpec basis{3, 6, 3};
  const int L = max_frequency_for_grid(N);
  std::vector<PeriodicSignal> fns;
  auto add = [&](auto coeff) {
    FourierCoeffs b(L);
    for (int l = -L; l <= L; ++l) b[l] = coeff(l);
    fns.push_back(from_fourier(b, N));
  };
  for (int k = 0; k < 8; ++k) add([&](int l) { return phi_fourier(3, k, l); });
  for (int j = 3; j <= 6; ++j)
    for (int k = 0; k < (1 << j); ++k) add([&](int l) { return psi_fourier(j, k, l); });
  double gram = 0.0;
  for (std::size_t a = 0; a < fns.size(); ++a)
    for (std::size_t b = a; b < fns.size(); ++b) {
      double ip = 0.0;
      for (std::size_t i = 0; i < N; ++i) ip += fns[a][i] * fns[b][i];
      ip /= static_cast<double>(N);
      gram = std::max(gram, std::abs(ip - (a == b ? 1.0 : 0.0)));
    }

  // The levels 3..6 span every frequency below 2^7/3, so a signal band-limited there is reproduced exactly.
  double parseval = 0.0;
  for (SignalName s : {SignalName::Wave, SignalName::HeaviSine, SignalName::Blocks, SignalName::Bumps}) {
    const FourierCoeffs theta = truncate(truncate(to_fourier(test_signal(s, N), L), 42), L);
    const double energy = from_fourier(theta, N).norm_squared();
    parseval = std::max(parseval, std::abs(analyze(theta, basis).squared_norm() - energy) / energy);
  }
  return {gram < 1e-8 && parseval < 1e-8, "Gram max error " + fmt(gram) + ", Parseval max rel error " + fmt(parseval)};
}

Outcome risk_oracle() {
  ExperimentConfig c;
  c.signal = SignalName::HeaviSine;
  c.n = 100;
  c.N = 512;
  c.density = ShiftDensity::laplace(0.1);
  const double eps = 0.05;
  c.noise_sd = eps * std::sqrt(static_cast<double>(c.N));
  c.replications = 2000;
  c.seed = 20;
  EstimatorSpec cut = spec("spectral_cutoff");
  cut.M = 4;
  c.estimators = {cut};
  const RiskReport r = run_risk_study(c, workers());
  const EstimatorRisk& e = r.at("spectral_cutoff");
  const int L = max_frequency_for_grid(c.N);
  const double oracle = linear_risk_closed_form(to_fourier(true_signal(c), L), c.density,
                                                LinearFilter::projection(4, L), eps, c.n);
  const double se = e.std_error.value_or(INFINITY);
  const double z = std::abs(e.mean_mise - oracle) / se;
  return {e.failures == 0 && z <= 3.0,
          "Monte Carlo " + fmt(e.mean_mise) + " +- " + fmt(se) + " vs closed form " + fmt(oracle) + " (" + fmt(z) + " SE)"};
}

Outcome gradient_check() {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.25, 0.25);
  std::uniform_int_distribution<int> nd(2, 10), ld(1, 5);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = static_cast<std::size_t>(nd(rng));
    const int ell0 = ld(rng);
    CurveCoeffsMatrix c(n, ell0);
    for (std::size_t m = 0; m < n; ++m) c.set_row(m, testing::random_real_spectrum(ell0, rng));
    std::vector<double> taus(n);
    for (double& t : taus) t = u(rng);
    const std::vector<double> g = gradient_mn(c, taus, ell0);
    double scale = 0.0;
    for (double v : g) scale = std::max(scale, std::abs(v));
    const double h = 1e-6;
    for (std::size_t m = 0; m < n; ++m) {
      std::vector<double> p = taus, q = taus;
      p[m] += h;
      q[m] -= h;
      const double fd = (criterion_mn(c, p, ell0) - criterion_mn(c, q, ell0)) / (2 * h);
      worst = std::max(worst, std::abs(fd - g[m]) / scale);
    }
  }
  return {worst < 1e-5, "max relative error " + fmt(worst) + " over 100 instances"};
}

Outcome noiseless_recovery() {
  ExperimentConfig c;
  c.signal = SignalName::HeaviSine;
  c.n = 20;
  c.N = 512;
  c.noise_sd = 0.0;
  c.density = ShiftDensity::uniform_centered(0.25);
  int ok = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    c.seed = seed;
    const Dataset d = simulate(c, 0);
    const ShiftEstimate e = estimate_shifts(curve_coeffs(d.curves, max_frequency_for_grid(c.N)), {3, 2.0, 1e-6, 500});
    const double rms = std::sqrt(centered_shift_error(e.taus, d.shifts));
    worst = std::max(worst, rms);
    if (rms < 1e-3) ++ok;
  }
  return {ok == 20, std::to_string(ok) + "/20 seeds below 1e-3 RMS, worst " + fmt(worst)};
}

Outcome noise_floor() {
  const double eps = 0.1;
  const ShiftDensity g = ShiftDensity::truncated_cosine(0.2);
  double mse[2] = {0, 0};
  double bound = 0.0;
  const std::size_t sizes[2] = {200, 1600};
  for (int s = 0; s < 2; ++s) {
    ExperimentConfig c;
    c.signal = SignalName::HeaviSine;
    c.n = sizes[s];
    c.N = 512;
    c.density = g;
    c.noise_sd = eps * std::sqrt(static_cast<double>(c.N));
    c.seed = 5;
    const std::size_t reps = 200;
    std::vector<double> err(reps);
    parallel_for(reps, workers(), [&](std::size_t r) {
      const Dataset d = simulate(c, r);
      const ShiftEstimate e = estimate_shifts(curve_coeffs(d.curves, max_frequency_for_grid(c.N)), {3, 2.0, 1e-6, 500});
      err[r] = centered_shift_error(e.taus, d.shifts);
    });
    for (double v : err) mse[s] += v;
    mse[s] /= static_cast<double>(reps);
    bound = van_trees_bound(to_fourier(true_signal(c), max_frequency_for_grid(c.N)), eps, g, 3);
  }
  const bool pass = mse[0] >= bound && mse[1] >= bound && mse[1] >= 0.5 * mse[0];
  return {pass, "MSE n=200 " + fmt(mse[0]) + ", n=1600 " + fmt(mse[1]) + ", Van Trees bound " + fmt(bound)};
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

Outcome consistency() {
  double med[2];
  const std::size_t sizes[2] = {50, 800};
  for (int s = 0; s < 2; ++s) {
    ExperimentConfig c;
    c.signal = SignalName::HeaviSine;
    c.n = sizes[s];
    c.density = ShiftDensity::laplace(0.1);
    c.replications = 30;
    c.seed = 6;
    c.estimators = {spec("hard_threshold")};
    const EstimatorRisk e = run_risk_study(c, workers()).at("hard_threshold");
    if (e.failures) return {false, std::to_string(e.failures) + " failed replications"};
    std::vector<double> v;
    for (const auto& x : e.values) v.push_back(*x);
    med[s] = median(v);
  }
  return {med[1] < 0.5 * med[0], "median MISE n=50 " + fmt(med[0]) + ", n=800 " + fmt(med[1])};
}

Outcome qualitative() {
  std::string detail;
  bool pass = true;
  for (SignalName s : {SignalName::Wave, SignalName::HeaviSine, SignalName::Blocks, SignalName::Bumps}) {
    ExperimentConfig c;
    c.signal = s;
    c.n = 200;
    c.N = 512;
    c.density = ShiftDensity::laplace(0.1);
    c.replications = 50;
    c.seed = 7;
    EstimatorSpec fn2 = spec("fn2");
    fn2.eta = 1.5;
    fn2.ell0 = 3;
    fn2.j0 = 3;
    fn2.j1 = 7;
    c.estimators = {spec("direct"), spec("procrustean"), fn2};
    const RiskReport r = run_risk_study(c, workers());
    const double d = r.at("direct").mean_mise, p = r.at("procrustean").mean_mise, f = r.at("fn2").mean_mise;
    bool ok = r.at("fn2").failures == 0 && f < d;
    if (s == SignalName::Blocks || s == SignalName::Bumps) ok = ok && f <= p;
    pass = pass && ok;
    detail += (detail.empty() ? "" : "; ") + to_string(s) + " fn2 " + fmt(f) + " direct " + fmt(d) + " procrustean " + fmt(p);
  }
  return {pass, detail};
}

Outcome deviation() {
  const ShiftDensity g = ShiftDensity::laplace(0.1);
  const std::size_t n = 100, N = 512, reps = 5000;
  const int j = 5;
  const double eps = (1.0 / 7.0) / std::sqrt(static_cast<double>(N));
  const int L = max_basis_frequency(j);
  const WaveletBasisSpec basis{j, j, 3};
  const FourierCoeffs theta = to_fourier(band_limit(test_signal(SignalName::HeaviSine, N)), L);
  const std::vector<double> beta = analyze(theta, basis).level(j);
  const Eigenvalues eig = known_eigenvalues(g, L);
  const double lambda = threshold(j, n, {2.0, SigmaSource::KnownDensity}, sigma_j(g, eps, j));

  std::vector<std::size_t> exceed(reps);
  parallel_for(reps, workers(), [&](std::size_t r) {
    std::mt19937_64 rng = replication_rng(8, r);
    const std::vector<double> taus = testing::draw_shifts(g, n, rng);
    const CurveCoeffsMatrix c = testing::sequence_curves(theta, taus, eps, rng);
    const Deconvolution dec = deconvolve(sample_mean_coeffs(c), eig.gamma, eig.floor);
    const std::vector<double> bhat = analyze(dec.theta, basis).level(j);
    for (std::size_t k = 0; k < beta.size(); ++k)
      if (std::abs(bhat[k] - beta[k]) >= lambda) ++exceed[r];
  });
  double total = 0.0;
  for (std::size_t e : exceed) total += static_cast<double>(e);
  const double freq = total / static_cast<double>(reps * beta.size());
  return {freq <= 0.05, "exceedance frequency " + fmt(freq) + " at lambda " + fmt(lambda)};
}

Outcome rate_ordering() {
  ExperimentConfig c;
  c.signal = SignalName::Wave;
  c.replications = 30;
  c.seed = 9;
  const std::vector<std::size_t> grid = {50, 100, 200, 400, 800, 1600};
  c.density = ShiftDensity::dirac();
  const RateReport dirac = rate_study(c, grid, {1.0, 0.0}, workers());
  c.density = ShiftDensity::laplace(0.1);
  const RateReport laplace = rate_study(c, grid, {1.0, 2.0}, workers());
  return {dirac.slope < laplace.slope, "slope Dirac " + fmt(dirac.slope) + ", Laplace " + fmt(laplace.slope)};
}

int shell(const std::string& cmd) {
  const int rc = std::system(cmd.c_str());
  return rc;
}

// Every file except timing.json must match byte for byte.
std::string compare_trees(const fs::path& a, const fs::path& b) {
  std::size_t files = 0;
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (!entry.is_regular_file() || entry.path().filename() == "timing.json") continue;
    const fs::path other = b / fs::relative(entry.path(), a);
    if (!fs::exists(other)) return "missing " + other.string();
    if (io::read_text(entry.path()) != io::read_text(other)) return "differs: " + fs::relative(entry.path(), a).string();
    ++files;
  }
  if (files == 0) return "no outputs in " + a.string();
  return {};
}

Outcome determinism(const std::string& cli) {
  if (cli.empty() || !fs::exists(cli)) return {false, "CLI binary not given or missing"};
  const fs::path work = fs::temp_directory_path() / ("shiftmean_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(work);
  fs::create_directories(work);

  ExperimentConfig c;
  c.signal = SignalName::Bumps;
  c.n = 30;
  c.N = 256;
  c.replications = 6;
  c.seed = 17;
  c.estimators = {spec("direct"), spec("procrustean"), spec("fn1"), spec("fn2"), spec("hard_threshold")};
  const fs::path cfg = work / "config.json";
  io::write_text(cfg, io::dump(io::to_json(c)));
  const std::string base = "\"" + cli + "\" ";
  const std::string common = " --config \"" + cfg.string() + "\" --seed 23";

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"simulate", "simulate --replication 2"},
      {"estimate", "estimate --estimator fn2 --data \"" + (work / "simulate_a" / "dataset.csv").string() + "\""},
      {"risk", "risk"},
      {"rate", "rate --n-grid 20,60,200 --replications 3"},
      {"compare", "compare --replications 3 --sample-curves 4"},
  };
  std::string detail;
  for (const auto& [name, args] : commands) {
    const fs::path a = work / (name + "_a"), b = work / (name + "_b");
    // the second run takes its thread count from the environment
    const int ra = shell(base + args + common + " --threads 1 --out-dir \"" + a.string() + "\" > /dev/null");
    const int rb = shell("SHIFTMEAN_THREADS=4 " + base + args + common + " --out-dir \"" + b.string() + "\" > /dev/null");
    if (ra != 0 || rb != 0) return {false, name + " exited with a failure status"};
    const std::string diff = compare_trees(a, b);
    if (!diff.empty()) return {false, name + ": " + diff};
    detail += (detail.empty() ? "" : ", ") + name;
  }
  fs::remove_all(work);
  return {true, "identical outputs for " + detail};
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  std::set<int> known;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--known-failure" && i + 1 < argc)
      known.insert(std::stoi(argv[++i]));
    else
      cli = a;
  }
  std::cout << "acceptance suite, " << workers() << " worker threads" << std::endl;
  run(1, "Meyer basis orthonormality and Parseval", 10, meyer_basis);
  run(2, "projection estimator risk against the closed form", 120, risk_oracle);
  run(3, "analytic gradient against central differences", 5, gradient_check);
  run(4, "noiseless shift recovery", 10, noiseless_recovery);
  run(5, "shift-error noise floor", 300, noise_floor);
  run(6, "deconvolution consistency", 180, consistency);
  run(7, "fn2 against direct and Procrustean means", 600, qualitative);
  run(8, "threshold deviation bound", 180, deviation);
  run(9, "rate ordering Dirac versus Laplace", 600, rate_ordering);
  run(10, "CLI determinism across thread counts", 0, [&] { return determinism(cli); });
  std::cout << (10 - failed.size()) << "/10 criteria passed" << std::endl;
  if (failed == known) {
    if (!known.empty()) std::cout << "all failures are declared known failures" << std::endl;
    return 0;
  }
  for (int id : known)
    if (!failed.contains(id)) std::cout << "criterion " << id << " was declared a known failure but passed" << std::endl;
  for (int id : failed)
    if (!known.contains(id)) std::cout << "criterion " << id << " failed unexpectedly" << std::endl;
  return 1;
}
