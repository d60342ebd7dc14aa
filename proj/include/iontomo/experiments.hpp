#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "iontomo/calib.hpp"
#include "iontomo/noise.hpp"
#include "iontomo/tomo.hpp"

namespace iontomo {

// Campaign parameters shared by all CLI experiments. shots empty = exact mode.
struct ExperimentConfig {
  std::string name;
  std::uint64_t seed = 1;
  int trials = 100;
  std::vector<long long> shots;        // per-circuit sample sizes; empty means exact
  double epsilon = 0.01;
  ReadoutErrors readout{0.01, 0.03};
  double crosstalk_beta = 0.05;        // model options
  double crosstalk_gamma = 0.0;
  std::string out;
};

void validate(const ExperimentConfig& cfg);  // throws std::invalid_argument

struct ReadoutCalibResult {
  ReadoutEstimate estimate;
  double shots = 0.0;  // per calibration run (1 in exact mode)
  bool exact = false;
};

// Simulates bright/dark calibration runs at the configured error rates and
// estimates them back. Uses the first entry of cfg.shots (exact if empty).
ReadoutCalibResult run_readout_calib(const ExperimentConfig& cfg);

struct Fig2bRow {
  long long shots = 0;  // 0 = exact
  double median_infidelity = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
};

struct Fig2bResult {
  std::vector<Fig2bRow> rows;
  std::vector<std::vector<double>> infidelities;  // per shots value, per trial
};

// QT-gate estimation campaign: per trial draw (a,b,c) at epsilon, simulate the
// four estimation circuits, reconstruct, record infidelity of the realized
// SqrtX estimate vs truth.
Fig2bResult run_fig2b(const ExperimentConfig& cfg);

struct Fig3Trial {
  long long shots = 0;
  int trial = 0;
  double f_reconstructed = 0.0;
  double f_standard = 0.0;
};

struct Fig3Summary {
  long long shots = 0;
  double median_nines_reconstructed = 0.0;
  double median_nines_standard = 0.0;
  double median_f_reconstructed = 0.0;
  double median_f_standard = 0.0;
};

struct Fig3Result {
  std::vector<Fig3Trial> trials;
  std::vector<Fig3Summary> summaries;
};

// Calibrated-synthesis campaign: per trial draw a ground-truth linear gate
// model, tomograph the four calibration gates, fit the model, plan two-gate
// sequences for a random target from both the fitted and the ideal model, and
// score both plans against ground truth.
Fig3Result run_fig3(const ExperimentConfig& cfg);

struct CrossTalkTrial {
  long long shots = 0;
  int trial = 0;
  double joint_f = 0.0;
  double q0_f = 0.0;
  double q1_f = 0.0;
};

struct CrossTalkResult {
  std::vector<CrossTalkTrial> trials;
};

// Two-ion campaign: draw cross-talk models for both qubits, tomograph target
// and neighbor effects per qubit, fit both linear models, compensate with
// U2 = I, and evaluate against ground truth.
CrossTalkResult run_crosstalk(const ExperimentConfig& cfg);

// -log10(1 - f), clamped at 16 nines.
double nines(double f);

// Median of a copy of v (average of middle pair for even sizes).
double median(std::vector<double> v);
double quantile(std::vector<double> v, double q);

// Threshold checks behind the CLI --check flag; each returns a human-readable
// failure description or nullopt on pass.
std::optional<std::string> check_fig2b(const Fig2bResult& r);
std::optional<std::string> check_fig3(const Fig3Result& r);
std::optional<std::string> check_crosstalk(const CrossTalkResult& r);
std::optional<std::string> check_readout_calib(const ReadoutCalibResult& r,
                                               const ReadoutErrors& truth);

// CSV emission, header row + >= 12 significant digits, byte-stable.
std::string to_csv(const Fig2bResult& r);
std::string to_csv(const Fig3Result& r);          // per-trial rows
std::string summary_csv(const Fig3Result& r);
std::string to_csv(const CrossTalkResult& r);

std::string format_double(double v);  // "%.15g"

// Runs fn(trial_index) over a thread pool; results must be written into
// preallocated per-trial slots so the outcome is schedule-independent.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace iontomo
