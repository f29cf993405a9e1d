// Command-line front end: simulate, estimate, risk, rate, compare.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "shiftmean/baselines.hpp"
#include "shiftmean/errors.hpp"
#include "shiftmean/io.hpp"
#include "shiftmean/risk.hpp"

namespace fs = std::filesystem;
using namespace shiftmean;

namespace {

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  std::optional<std::size_t> threads;
  bool paper_defaults = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "experiment config JSON");
  cmd->add_option("--seed", c.seed, "master seed (overrides the config)");
  cmd->add_option("--out-dir", c.out_dir, "output directory")->capture_default_str();
  cmd->add_option("--threads", c.threads, "worker threads (fallback: SHIFTMEAN_THREADS, then 1)");
  cmd->add_flag("--paper-defaults", c.paper_defaults, "use the reference experiment configuration");
}

std::size_t thread_count(const Common& c) {
  if (c.threads) {
    if (*c.threads == 0) throw ParameterError("--threads: must be >= 1");
    return *c.threads;
  }
  if (const char* env = std::getenv("SHIFTMEAN_THREADS")) {
    std::size_t v = 0;
    std::istringstream in(env);
    if (!(in >> v) || v == 0 || !in.eof()) throw ParameterError("SHIFTMEAN_THREADS: expected a positive integer");
    return v;
  }
  return 1;
}

EstimatorSpec named(const std::string& name) {
  EstimatorSpec e;
  e.name = name;
  e.j0 = 3;
  e.j1 = 7;
  return e;
}

ExperimentConfig reference_config() {
  ExperimentConfig c;
  c.signal = SignalName::HeaviSine;
  c.n = 200;
  c.N = 512;
  c.density = ShiftDensity::laplace(0.1);
  c.noise_sd = 1.0 / 7.0;
  c.estimators = {named("direct"), named("procrustean"), named("fn1"), named("fn2")};
  c.replications = 50;
  c.seed = 1;
  return c;
}

ExperimentConfig load_config(const Common& c, bool required) {
  ExperimentConfig cfg;
  if (!c.config_path.empty()) {
    io::json j;
    try {
      j = io::json::parse(io::read_text(c.config_path));
    } catch (const nlohmann::json::parse_error& e) {
      throw ParameterError("config: malformed JSON (" + std::string(e.what()) + ")");
    }
    cfg = io::config_from_json(j);
  } else if (c.paper_defaults || !required) {
    cfg = reference_config();
  } else {
    throw ParameterError("--config: required (or pass --paper-defaults)");
  }
  if (c.seed) cfg.seed = *c.seed;
  validate(cfg);
  return cfg;
}

fs::path prepare(const Common& c) {
  fs::path dir(c.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ParameterError("--out-dir: cannot create " + dir.string());
  return dir;
}

template <typename Writer, typename Value>
void write_csv(const fs::path& path, Writer writer, const Value& value) {
  std::ostringstream out;
  writer(out, value);
  io::write_text(path, out.str());
}

int cmd_simulate(const Common& c, std::uint64_t replication) {
  const ExperimentConfig cfg = load_config(c, false);
  const fs::path dir = prepare(c);
  const Dataset d = simulate(cfg, replication);
  write_csv(dir / "dataset.csv", io::write_dataset_csv, d.curves);
  write_csv(dir / "shifts.csv", io::write_shifts_csv, d.shifts);
  write_csv(dir / "truth.csv", io::write_signal_csv, d.truth);
  io::json meta = io::to_json(cfg);
  io::write_text(dir / "dataset.json", io::dump({{"config", meta}, {"replication", replication}}));
  return 0;
}

struct EstimateArgs {
  std::string data;
  std::string estimator = "fn2";
  std::optional<double> eta;
  std::optional<int> ell0, j0, j1, M;
  std::optional<bool> known_g;
};

int cmd_estimate(const Common& c, const EstimateArgs& a) {
  ExperimentConfig cfg = load_config(c, false);
  std::ifstream in(a.data);
  if (!in) throw ParameterError("--data: cannot read " + a.data);
  const std::vector<PeriodicSignal> curves = io::read_dataset_csv(in);

  EstimatorSpec spec = named(a.estimator);
  for (const EstimatorSpec& e : cfg.estimators)
    if (e.name == a.estimator) spec = e;
  if (a.eta) spec.eta = *a.eta;
  if (a.ell0) spec.ell0 = *a.ell0;
  if (a.j0) spec.j0 = *a.j0;
  if (a.j1) spec.j1 = *a.j1;
  if (a.M) spec.M = *a.M;
  if (a.known_g) spec.known_g = *a.known_g;
  cfg.n = curves.size();
  cfg.N = curves.front().size();
  cfg.estimators = {spec};
  validate(cfg);

  const fs::path dir = prepare(c);
  EstimationContext ctx(cfg, curves);
  const EstimateResult r = run_estimator(spec, ctx);
  write_csv(dir / "estimate.csv", io::write_signal_csv, r.f_hat);
  io::write_text(dir / "estimate_meta.json", io::dump(io::to_json(r.meta)));
  if (r.wavelet) write_csv(dir / "wavelet.csv", io::write_wavelet_csv, *r.wavelet);
  if (spec.name == "fn1" || spec.name == "fn2" || spec.name == "frechet" ||
      (!spec.known_g && (spec.name == "hard_threshold" || spec.name == "spectral_cutoff"))) {
    const ShiftEstimate& s = ctx.shifts(spec.ell0);
    write_csv(dir / "shifts_hat.csv", io::write_shifts_csv, s.taus);
    write_csv(dir / "trace.csv", io::write_trace_csv, s.trace);
  }
  return 0;
}

int cmd_risk(const Common& c, std::optional<std::size_t> replications) {
  ExperimentConfig cfg = load_config(c, true);
  if (replications) cfg.replications = *replications;
  validate(cfg);
  const fs::path dir = prepare(c);
  const RiskReport r = run_risk_study(cfg, thread_count(c));
  io::write_text(dir / "risk_report.json", io::dump(io::to_json(r)));
  write_csv(dir / "risk_summary.csv", io::write_risk_csv, r);
  write_csv(dir / "risk_replications.csv", io::write_risk_replications_csv, r);
  io::write_text(dir / "timing.json", io::dump({{"wall_clock_seconds", r.wall_clock_seconds}, {"threads", r.threads}}));
  for (const EstimatorRisk& e : r.estimators)
    if (e.failures > 0) std::cerr << "warning: " << e.key << " failed in " << e.failures << " replication(s)\n";
  return 0;
}

struct RateArgs {
  std::vector<std::size_t> n_grid{50, 100, 200, 400, 800, 1600};
  double s = 1.0;
  std::optional<double> nu;
  std::optional<std::size_t> replications;
};

int cmd_rate(const Common& c, const RateArgs& a) {
  ExperimentConfig cfg = load_config(c, true);
  if (c.config_path.empty()) cfg.replications = 30;
  if (a.replications) cfg.replications = *a.replications;
  validate(cfg);
  const fs::path dir = prepare(c);
  const RateReport r = rate_study(cfg, a.n_grid, {a.s, a.nu ? *a.nu : cfg.density.nu()}, thread_count(c));
  io::json j = io::to_json(r);
  j["config"] = io::to_json(cfg);
  io::write_text(dir / "rate_report.json", io::dump(j));
  write_csv(dir / "rate.csv", io::write_rate_csv, r);
  io::write_text(dir / "timing.json", io::dump({{"wall_clock_seconds", r.wall_clock_seconds}}));
  return 0;
}

int cmd_compare(const Common& c, std::size_t replications, std::size_t sample_curves) {
  ExperimentConfig base = load_config(c, true);
  const fs::path dir = prepare(c);
  const std::size_t threads = thread_count(c);
  std::ostringstream summary;
  summary << "signal,estimator,mise\n";
  std::ostringstream risk;
  risk << "signal,estimator,mean_mise,std_error,replications,failures\n";
  for (SignalName s : {SignalName::Wave, SignalName::HeaviSine, SignalName::Blocks, SignalName::Bumps}) {
    ExperimentConfig cfg = base;
    cfg.signal = s;
    cfg.estimators = {named("direct"), named("fn1"), named("fn2"), named("procrustean")};
    for (const EstimatorSpec& e : base.estimators)
      for (EstimatorSpec& t : cfg.estimators)
        if (t.name == e.name) t = e;
    const fs::path sub = dir / to_string(s);
    fs::create_directories(sub);

    const Dataset d = simulate(cfg, 0);
    EstimationContext ctx(cfg, d.curves);
    write_csv(sub / "mean_pattern.csv", io::write_signal_csv, d.truth);
    const std::vector<PeriodicSignal> sample(d.curves.begin(),
                                             d.curves.begin() + static_cast<long>(std::min(sample_curves, d.curves.size())));
    write_csv(sub / "sample.csv", io::write_dataset_csv, sample);
    const char* files[] = {"direct_mean.csv", "fn1.csv", "fn2.csv", "procrustean.csv"};
    for (std::size_t k = 0; k < cfg.estimators.size(); ++k) {
      const EstimateResult r = run_estimator(cfg.estimators[k], ctx);
      write_csv(sub / files[k], io::write_signal_csv, r.f_hat);
      summary << to_string(s) << ',' << cfg.estimators[k].key() << ',' << io::format_double(mise(r.f_hat, d.truth)) << '\n';
    }
    if (replications > 0) {
      cfg.replications = replications;
      const RiskReport rr = run_risk_study(cfg, threads);
      for (const EstimatorRisk& e : rr.estimators)
        risk << to_string(s) << ',' << e.key << ',' << io::format_double(e.mean_mise) << ','
             << (e.std_error ? io::format_double(*e.std_error) : "") << ',' << e.replications << ',' << e.failures << '\n';
    }
  }
  io::write_text(dir / "compare_summary.csv", summary.str());
  if (replications > 0) io::write_text(dir / "compare_risk.csv", risk.str());
  io::json cj = io::to_json(base);
  io::write_text(dir / "compare_config.json", io::dump(cj));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mean pattern estimation from randomly shifted curves"};
  app.require_subcommand(1);
  Common common;

  CLI::App* sim = app.add_subcommand("simulate", "simulate one dataset (dataset.csv, shifts.csv, truth.csv)");
  add_common(sim, common);
  std::uint64_t replication = 0;
  sim->add_option("--replication", replication, "replication index")->capture_default_str();

  CLI::App* est = app.add_subcommand("estimate", "run one estimator on a dataset CSV");
  add_common(est, common);
  EstimateArgs ea;
  est->add_option("--data", ea.data, "dataset CSV with columns m,i,y")->required();
  est->add_option("--estimator", ea.estimator, "direct, procrustean, hard_threshold, fn1, fn2, frechet, spectral_cutoff")
      ->capture_default_str();
  est->add_option("--eta", ea.eta);
  est->add_option("--ell0", ea.ell0);
  est->add_option("--j0", ea.j0);
  est->add_option("--j1", ea.j1);
  est->add_option("--M", ea.M);
  est->add_option("--known-g", ea.known_g, "use the configured density (true) or estimated shifts (false)");

  CLI::App* risk = app.add_subcommand("risk", "Monte Carlo risk study");
  add_common(risk, common);
  std::optional<std::size_t> risk_reps;
  risk->add_option("--replications", risk_reps);

  CLI::App* rate = app.add_subcommand("rate", "risk slope against the sample size");
  add_common(rate, common);
  RateArgs ra;
  rate->add_option("--n-grid", ra.n_grid, "sample sizes")->delimiter(',')->capture_default_str();
  rate->add_option("--s", ra.s, "smoothness for the reference slope")->capture_default_str();
  rate->add_option("--nu", ra.nu, "ill-posedness for the reference slope (default: the density's)");
  rate->add_option("--replications", ra.replications);

  CLI::App* cmp = app.add_subcommand("compare", "four-signal comparison of direct, fn1, fn2 and Procrustean means");
  add_common(cmp, common);
  std::size_t cmp_reps = 0;
  std::size_t sample_curves = 10;
  cmp->add_option("--replications", cmp_reps, "also run a risk study with this many replications")->capture_default_str();
  cmp->add_option("--sample-curves", sample_curves, "curves written to sample.csv")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (sim->parsed()) return cmd_simulate(common, replication);
    if (est->parsed()) return cmd_estimate(common, ea);
    if (risk->parsed()) return cmd_risk(common, risk_reps);
    if (rate->parsed()) return cmd_rate(common, ra);
    if (cmp->parsed()) return cmd_compare(common, cmp_reps, sample_curves);
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
