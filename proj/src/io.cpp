#include "shiftmean/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "shiftmean/errors.hpp"

namespace shiftmean::io {
namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r' && c != '"') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

bool parse_number(const std::string& s, double& v) {
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  return ec == std::errc() && ptr == end;
}

double number_at(const std::string& s, std::size_t line) {
  double v = 0.0;
  if (!parse_number(s, v)) throw ParameterError("csv line " + std::to_string(line) + ": not a number '" + s + "'");
  return v;
}

/// Rows of a CSV with an optional header row; numeric cells only.
std::vector<std::vector<double>> read_rows(std::istream& in, std::size_t columns) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> cells = split(line);
    double probe = 0.0;
    if (lineno == 1 && !parse_number(cells.front(), probe)) continue;
    if (cells.size() != columns)
      throw ParameterError("csv line " + std::to_string(lineno) + ": expected " + std::to_string(columns) + " columns");
    std::vector<double> row;
    for (const std::string& c : cells) row.push_back(number_at(c, lineno));
    rows.push_back(std::move(row));
  }
  return rows;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

template <typename T>
T field(const json& j, const std::string& name, const std::string& path) {
  try {
    return j.at(name).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(path + name + ": " + (j.contains(name) ? "wrong type" : "missing"));
  }
}

template <typename T>
void optional_field(const json& j, const std::string& name, const std::string& path, T& target) {
  if (j.contains(name)) target = field<T>(j, name, path);
}

void reject_unknown(const json& j, std::initializer_list<const char*> known, const std::string& path) {
  if (!j.is_object()) throw ParameterError((path.empty() ? std::string("config") : path) + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw ParameterError(path + key + ": unknown field");
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_signal_csv(std::ostream& out, const PeriodicSignal& signal) {
  out << "value\n";
  for (double v : signal.samples()) out << format_double(v) << '\n';
}

void write_shifts_csv(std::ostream& out, const std::vector<double>& shifts) {
  out << "tau\n";
  for (double v : shifts) out << format_double(v) << '\n';
}

void write_coeffs_csv(std::ostream& out, const CurveCoeffsMatrix& coeffs) {
  out << "m,ell,re,im\n";
  for (std::size_t m = 0; m < coeffs.curves(); ++m)
    for (int ell = -coeffs.max_freq(); ell <= coeffs.max_freq(); ++ell) {
      const cplx c = coeffs.at(m, ell);
      out << m << ',' << ell << ',' << format_double(c.real()) << ',' << format_double(c.imag()) << '\n';
    }
}

void write_wavelet_csv(std::ostream& out, const WaveletCoeffs& w) {
  out << "kind,j,k,value\n";
  for (std::size_t k = 0; k < w.coarse.size(); ++k) out << "coarse," << w.j0 << ',' << k << ',' << format_double(w.coarse[k]) << '\n';
  for (int j = w.j0; j <= w.j1(); ++j) {
    const std::vector<double>& beta = w.level(j);
    for (std::size_t k = 0; k < beta.size(); ++k) out << "detail," << j << ',' << k << ',' << format_double(beta[k]) << '\n';
  }
}

void write_dataset_csv(std::ostream& out, const std::vector<PeriodicSignal>& curves) {
  out << "m,i,y\n";
  for (std::size_t m = 0; m < curves.size(); ++m)
    for (std::size_t i = 0; i < curves[m].size(); ++i) out << m << ',' << i << ',' << format_double(curves[m][i]) << '\n';
}

void write_trace_csv(std::ostream& out, const DescentTrace& trace) {
  out << "iter,M,step,grad_norm\n";
  for (const DescentStep& s : trace.steps)
    out << s.iter << ',' << format_double(s.criterion) << ',' << format_double(s.step) << ','
        << format_double(s.grad_norm) << '\n';
}

void write_risk_csv(std::ostream& out, const RiskReport& report) {
  out << "estimator,name,mean_mise,std_error,replications,failures\n";
  for (const EstimatorRisk& e : report.estimators)
    out << e.key << ',' << e.name << ',' << (std::isfinite(e.mean_mise) ? format_double(e.mean_mise) : "") << ','
        << (e.std_error ? format_double(*e.std_error) : "") << ',' << e.replications << ',' << e.failures << '\n';
}

void write_risk_replications_csv(std::ostream& out, const RiskReport& report) {
  out << "replication";
  for (const EstimatorRisk& e : report.estimators) out << ',' << e.key;
  out << '\n';
  for (std::size_t r = 0; r < report.config.replications; ++r) {
    out << r;
    for (const EstimatorRisk& e : report.estimators) out << ',' << (e.values[r] ? format_double(*e.values[r]) : "");
    out << '\n';
  }
}

void write_rate_csv(std::ostream& out, const RateReport& report) {
  out << "n,mean_mise,std_error,replications,failures\n";
  for (const RatePoint& p : report.points)
    out << p.n << ',' << format_double(p.mean_mise) << ',' << (p.std_error ? format_double(*p.std_error) : "") << ','
        << p.replications << ',' << p.failures << '\n';
}

PeriodicSignal read_signal_csv(std::istream& in) {
  std::vector<double> v;
  for (const auto& row : read_rows(in, 1)) v.push_back(row[0]);
  return PeriodicSignal(std::move(v));
}

std::vector<double> read_shifts_csv(std::istream& in) {
  std::vector<double> v;
  for (const auto& row : read_rows(in, 1)) v.push_back(row[0]);
  return v;
}

std::vector<PeriodicSignal> read_dataset_csv(std::istream& in) {
  std::vector<std::vector<double>> samples;
  for (const auto& row : read_rows(in, 3)) {
    if (row[0] < 0 || row[1] < 0 || row[0] != std::floor(row[0]) || row[1] != std::floor(row[1]))
      throw ParameterError("dataset: m and i must be non-negative integers");
    const auto m = static_cast<std::size_t>(row[0]);
    const auto i = static_cast<std::size_t>(row[1]);
    if (m > samples.size()) throw ParameterError("dataset: curves must appear in order");
    if (m == samples.size()) samples.emplace_back();
    if (i != samples[m].size()) throw ParameterError("dataset: samples of curve " + std::to_string(m) + " out of order");
    samples[m].push_back(row[2]);
  }
  if (samples.empty()) throw ParameterError("dataset: no rows");
  const std::size_t grid = samples.front().size();
  std::vector<PeriodicSignal> curves;
  for (auto& s : samples) {
    if (s.size() != grid) throw ParameterError("dataset: curves must share one grid");
    curves.emplace_back(std::move(s));
  }
  return curves;
}

json to_json(const ShiftDensity& density) {
  return {{"kind", density.name()}, {"param", density.parameter()}, {"truncated", density.truncated()}};
}

ShiftDensity density_from_json(const json& j) {
  reject_unknown(j, {"kind", "param", "truncated"}, "density.");
  const std::string kind = field<std::string>(j, "kind", "density.");
  double param = 0.0;
  bool truncated = false;
  optional_field(j, "param", "density.", param);
  optional_field(j, "truncated", "density.", truncated);
  try {
    if (kind == "dirac") return ShiftDensity::dirac();
    if (kind == "uniform") return ShiftDensity::uniform_centered(param);
    if (kind == "laplace") return ShiftDensity::laplace(param, truncated);
    if (kind == "cosine") return ShiftDensity::truncated_cosine(param);
  } catch (const ParameterError& e) {
    throw ParameterError(std::string("density.param: ") + e.what());
  }
  throw ParameterError("density.kind: unknown density '" + kind + "'");
}

json to_json(const EstimatorSpec& s) {
  json j = {{"name", s.name}};
  if (!s.label.empty()) j["label"] = s.label;
  j["eta"] = s.eta;
  j["ell0"] = s.ell0;
  if (s.j0) j["j0"] = *s.j0;
  if (s.j1) j["j1"] = *s.j1;
  if (s.M) j["M"] = *s.M;
  j["known_g"] = s.known_g;
  if (s.estimate_noise) j["estimate_noise"] = *s.estimate_noise;
  j["i_max"] = s.i_max;
  j["refine"] = s.refine;
  return j;
}

EstimatorSpec estimator_from_json(const json& j) {
  const std::string p = "estimators.";
  reject_unknown(j, {"name", "label", "eta", "ell0", "j0", "j1", "M", "known_g", "estimate_noise", "i_max", "refine"}, p);
  EstimatorSpec s;
  s.name = field<std::string>(j, "name", p);
  optional_field(j, "label", p, s.label);
  optional_field(j, "eta", p, s.eta);
  optional_field(j, "ell0", p, s.ell0);
  if (j.contains("j0") && !j["j0"].is_null()) s.j0 = field<int>(j, "j0", p);
  if (j.contains("j1") && !j["j1"].is_null()) s.j1 = field<int>(j, "j1", p);
  if (j.contains("M") && !j["M"].is_null()) s.M = field<int>(j, "M", p);
  optional_field(j, "known_g", p, s.known_g);
  if (j.contains("estimate_noise") && !j["estimate_noise"].is_null()) s.estimate_noise = field<bool>(j, "estimate_noise", p);
  optional_field(j, "i_max", p, s.i_max);
  optional_field(j, "refine", p, s.refine);
  return s;
}

json to_json(const ExperimentConfig& c) {
  json est = json::array();
  for (const EstimatorSpec& e : c.estimators) est.push_back(to_json(e));
  return {{"signal", to_string(c.signal)},
          {"n", c.n},
          {"N", c.N},
          {"density", to_json(c.density)},
          {"noise_sd", c.noise_sd},
          {"estimators", est},
          {"replications", c.replications},
          {"seed", c.seed},
          {"center_shifts", c.center_shifts},
          {"level_rule", c.level_rule == LevelRule::GridCeiling ? "grid" : "theoretical"},
          {"kappa", c.kappa},
          {"rho", c.rho},
          {"max_iters", c.max_iters}};
}

ExperimentConfig config_from_json(const json& j) {
  reject_unknown(j, {"signal", "n", "N", "density", "noise_sd", "estimators", "replications", "seed", "center_shifts",
                     "level_rule", "kappa", "rho", "max_iters"},
                 "");
  ExperimentConfig c;
  const std::string signal = field<std::string>(j, "signal", "");
  try {
    c.signal = parse_signal(signal);
  } catch (const ParameterError& e) {
    throw ParameterError(std::string("signal: ") + e.what());
  }
  c.n = field<std::size_t>(j, "n", "");
  c.N = field<std::size_t>(j, "N", "");
  if (!j.contains("density")) throw ParameterError("density: missing");
  c.density = density_from_json(j["density"]);
  optional_field(j, "noise_sd", "", c.noise_sd);
  if (j.contains("estimators")) {
    if (!j["estimators"].is_array()) throw ParameterError("estimators: expected an array");
    for (const json& e : j["estimators"]) c.estimators.push_back(estimator_from_json(e));
  }
  optional_field(j, "replications", "", c.replications);
  optional_field(j, "seed", "", c.seed);
  optional_field(j, "center_shifts", "", c.center_shifts);
  if (j.contains("level_rule")) {
    const std::string rule = field<std::string>(j, "level_rule", "");
    if (rule == "grid") c.level_rule = LevelRule::GridCeiling;
    else if (rule == "theoretical") c.level_rule = LevelRule::Theoretical;
    else throw ParameterError("level_rule: expected 'grid' or 'theoretical'");
  }
  optional_field(j, "kappa", "", c.kappa);
  optional_field(j, "rho", "", c.rho);
  optional_field(j, "max_iters", "", c.max_iters);
  validate(c);
  return c;
}

json to_json(const EstimateMeta& m) {
  json thresholds = json::array();
  for (double t : m.thresholds) thresholds.push_back(number_or_null(t));
  json j = {{"estimator", m.estimator}, {"n", m.n}, {"eps_hat", m.eps}, {"eta", m.eta}};
  j["j0"] = m.j0 >= 0 ? json(m.j0) : json(nullptr);
  j["j1"] = m.j1 >= 0 ? json(m.j1) : json(nullptr);
  j["ell0"] = m.ell0 >= 0 ? json(m.ell0) : json(nullptr);
  j["cutoff"] = m.cutoff >= 0 ? json(m.cutoff) : json(nullptr);
  j["zeroed_freqs"] = m.zeroed_freqs;
  j["thresholds"] = thresholds;
  return j;
}

json to_json(const RiskReport& r) {
  json est = json::array();
  for (const EstimatorRisk& e : r.estimators) {
    json fails = json::array();
    for (const std::string& s : e.failure_messages) fails.push_back(s);
    est.push_back({{"key", e.key},
                   {"name", e.name},
                   {"mean_mise", number_or_null(e.mean_mise)},
                   {"std_error", e.std_error ? json(*e.std_error) : json(nullptr)},
                   {"replications", e.replications},
                   {"failures", e.failures},
                   {"failure_messages", fails}});
  }
  const double eps = white_noise_level(r.config);
  return {{"config", to_json(r.config)},
          {"signal_normalization", "unit L2 norm on the grid, Nyquist bin removed"},
          {"snr", r.config.noise_sd > 0.0 ? json(1.0 / r.config.noise_sd) : json(nullptr)},
          {"eps", eps},
          {"estimators", est}};
}

json to_json(const RateReport& r) {
  json pts = json::array();
  for (const RatePoint& p : r.points)
    pts.push_back({{"n", p.n},
                   {"mean_mise", p.mean_mise},
                   {"std_error", p.std_error ? json(*p.std_error) : json(nullptr)},
                   {"replications", p.replications},
                   {"failures", p.failures}});
  return {{"estimator", r.estimator},
          {"s", r.smoothness.s},
          {"nu", r.smoothness.nu},
          {"points", pts},
          {"slope", r.slope},
          {"theoretical_slope", r.theoretical_slope}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParameterError("cannot write " + path.string());
  out << text;
  if (!out) throw ParameterError("write failed for " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParameterError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace shiftmean::io
