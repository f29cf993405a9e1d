#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "shiftmean/estimators.hpp"
#include "shiftmean/registration.hpp"
#include "shiftmean/risk.hpp"
#include "shiftmean/simulation.hpp"

namespace shiftmean::io {

using json = nlohmann::ordered_json;

/// Shortest text that reads back to the same double.
std::string format_double(double v);

// CSV writers (RFC 4180, header row, '\n' line ends).
void write_signal_csv(std::ostream& out, const PeriodicSignal& signal);            // value
void write_shifts_csv(std::ostream& out, const std::vector<double>& shifts);      // tau
void write_coeffs_csv(std::ostream& out, const CurveCoeffsMatrix& coeffs);        // m,ell,re,im
void write_wavelet_csv(std::ostream& out, const WaveletCoeffs& w);                // kind,j,k,value
void write_dataset_csv(std::ostream& out, const std::vector<PeriodicSignal>& curves);  // m,i,y
void write_trace_csv(std::ostream& out, const DescentTrace& trace);               // iter,M,step,grad_norm
void write_risk_csv(std::ostream& out, const RiskReport& report);
void write_risk_replications_csv(std::ostream& out, const RiskReport& report);  // replication,<keys...>
void write_rate_csv(std::ostream& out, const RateReport& report);

PeriodicSignal read_signal_csv(std::istream& in);
std::vector<double> read_shifts_csv(std::istream& in);
std::vector<PeriodicSignal> read_dataset_csv(std::istream& in);

json to_json(const ShiftDensity& density);
ShiftDensity density_from_json(const json& j);
json to_json(const EstimatorSpec& spec);
EstimatorSpec estimator_from_json(const json& j);
json to_json(const ExperimentConfig& config);
/// Throws ParameterError naming the offending field.
ExperimentConfig config_from_json(const json& j);

json to_json(const EstimateMeta& meta);
/// Report without wall-clock data, so equal inputs give equal text.
json to_json(const RiskReport& report);
json to_json(const RateReport& report);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);
/// Pretty-printed JSON followed by a newline.
std::string dump(const json& j);

}  // namespace shiftmean::io
