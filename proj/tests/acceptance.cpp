// End-to-end acceptance runs: one PASS/FAIL line per criterion, nonzero exit
// if any criterion fails. Expected wall time is a few minutes.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "iontomo/experiments.hpp"
#include "iontomo/serialize.hpp"

using namespace iontomo;

namespace {

constexpr double kPi = 3.14159265358979323846;
int g_failures = 0;

void report(const std::string& name, const std::optional<std::string>& failure) {
  if (failure) {
    ++g_failures;
    std::cout << "FAIL: " << name << " — " << *failure << "\n";
  } else {
    std::cout << "PASS: " << name << "\n";
  }
  std::cout.flush();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// --- 1: QT-gate estimation accuracy scales as 1/N over the full campaign ----

void criterion_fig2b_scaling() {
  ExperimentConfig cfg;
  cfg.name = "fig2b";
  cfg.seed = 1;
  cfg.trials = 100;
  cfg.shots = {100, 1000, 10000, 100000};
  const Fig2bResult res = run_fig2b(cfg);
  report("fig2b: median infidelity decreases ~1/N over N=1e2..1e5, 100 trials",
         check_fig2b(res));
}

// --- 2: calibrated synthesis beats the uncalibrated standard model ----------

void criterion_fig3_gain() {
  ExperimentConfig cfg;
  cfg.name = "fig3";
  cfg.seed = 1;
  cfg.trials = 100;
  cfg.shots = {1000, 10000, 100000};
  const Fig3Result res = run_fig3(cfg);
  report("fig3: calibrated synthesis reaches 3.5+ nines at N=1e4 and beats the "
         "standard model at every N, 100 trials",
         check_fig3(res));
}

// --- 3: infinite-statistics oracle consistency ------------------------------

void criterion_exact_recovery() {
  std::optional<std::string> failure;

  // readout rates recovered exactly
  ExperimentConfig ro_cfg;
  ro_cfg.name = "readout";
  ro_cfg.shots = {};
  const ReadoutCalibResult ro = run_readout_calib(ro_cfg);
  if (std::abs(ro.estimate.errors.e10 - ro_cfg.readout.e10) > 1e-12 ||
      std::abs(ro.estimate.errors.e01 - ro_cfg.readout.e01) > 1e-12)
    failure = "exact-mode readout calibration missed the configured rates";

  // QT gate parameters recovered from exact frequencies
  if (!failure) {
    Rng rng(20);
    for (int i = 0; i < 20 && !failure; ++i) {
      NoiseContext ctx = NoiseContext::ideal(1);
      ctx.readout[0] = ReadoutErrors{0.01, 0.03};
      ctx.qt[0] = random_qt_gate_params(0.01, rng);
      const TomographyDataset ds =
          run_protocol(qt_gate_circuits(), ctx, std::nullopt, Rng(0));
      const QtGateEstimate est = estimate_qt_gates(ds, ctx.readout[0]);
      const double err = std::max({std::abs(est.params.a - ctx.qt[0].a),
                                   std::abs(est.params.b - ctx.qt[0].b),
                                   std::abs(est.params.c - ctx.qt[0].c)});
      if (err > 1e-6)
        failure = "exact-mode QT gate estimate off by " + std::to_string(err);
    }
  }

  // linear gate model recovered from exact reconstructed angles
  if (!failure) {
    Rng rng(21);
    for (int i = 0; i < 20 && !failure; ++i) {
      const LinearGateModel truth = random_perturbed_model(0.01, rng);
      CalibrationSet cal = calibration_commands();
      for (auto& pt : cal)
        pt.reconstructed =
            unitary_to_rotation(u_rotation(realized_rotation(truth, pt.phi, pt.delta)));
      const LinearGateModel fit = fit_linear_model(cal);
      const double err = (fit.a - truth.a).cwiseAbs().maxCoeff();
      if (err > 1e-6) failure = "linear model fit off by " + std::to_string(err);
    }
  }

  // full exact-mode fig3 pipeline reaches machine-level fidelity
  if (!failure) {
    ExperimentConfig cfg;
    cfg.name = "fig3-exact";
    cfg.trials = 20;
    cfg.shots = {};
    const Fig3Result res = run_fig3(cfg);
    for (const auto& t : res.trials)
      if (t.f_reconstructed < 1.0 - 1e-8) {
        failure = "exact-mode fig3 trial " + std::to_string(t.trial) +
                  " fidelity " + std::to_string(t.f_reconstructed);
        break;
      }
  }

  report("exact mode: readout to 1e-12, QT gates and linear model to 1e-6, "
         "fig3 pipeline to 1 - 1e-8",
         failure);
}

// --- 4: structural invariants ------------------------------------------------

void criterion_invariants() {
  std::optional<std::string> failure;
  Rng rng(4);

  // POVM completeness is exact
  for (int i = 0; i < 10000 && !failure; ++i) {
    const ReadoutErrors e{rng.uniform(0.0, 0.45), rng.uniform(0.0, 0.45)};
    const auto [p0, p1] = readout_povm(e);
    if (((p0 + p1) - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() != 0.0)
      failure = "POVM completeness violated";
  }

  // probabilities normalize over random circuits and noise contexts
  for (int i = 0; i < 10000 && !failure; ++i) {
    NoiseContext ctx = NoiseContext::ideal(1);
    ctx.readout[0] = ReadoutErrors{rng.uniform(0.0, 0.1), rng.uniform(0.0, 0.1)};
    ctx.qt[0] = random_qt_gate_params(0.05, rng);
    ctx.gate_model = random_perturbed_model(0.05, rng);
    Circuit c;
    const int depth = 1 + static_cast<int>(rng.uniform() * 3);
    for (int g = 0; g < depth; ++g)
      c.prep.push_back(GateRef::pulse(rng.uniform(-kPi, kPi), rng.uniform(0.0, 2 * kPi)));
    const Eigen::VectorXd p = exact_probabilities(c, ctx);
    if (std::abs(p.sum() - 1.0) > 1e-12 || p.minCoeff() < 0.0)
      failure = "probability normalization violated";
  }

  // fidelity bounds / symmetry / phase invariance
  for (int i = 0; i < 10000 && !failure; ++i) {
    const Eigen::Matrix2cd u = u_rotation(std::acos(rng.uniform(-1.0, 1.0)),
                                          rng.uniform(-kPi, kPi), rng.uniform(0.0, 2 * kPi));
    const Eigen::Matrix2cd v = u_rotation(std::acos(rng.uniform(-1.0, 1.0)),
                                          rng.uniform(-kPi, kPi), rng.uniform(0.0, 2 * kPi));
    const double f = fidelity(u, v);
    const complexd phase = std::exp(complexd(0.0, rng.uniform(-kPi, kPi)));
    if (f < 0.0 || f > 1.0 || std::abs(f - fidelity(v, u)) > 1e-12 ||
        std::abs(f - fidelity(phase * u, v)) > 1e-12)
      failure = "fidelity invariant violated";
  }

  // canonical extraction round-trips
  for (int i = 0; i < 10000 && !failure; ++i) {
    const Eigen::Matrix2cd u = u_rotation(std::acos(rng.uniform(-1.0, 1.0)),
                                          rng.uniform(-kPi, kPi), rng.uniform(0.0, 2 * kPi));
    if (fidelity(u, u_rotation(unitary_to_rotation(u))) < 1.0 - 1e-12)
      failure = "axis/angle round trip violated";
  }

  // every rotation admits a two-equatorial-pulse decomposition
  for (int i = 0; i < 1000 && !failure; ++i) {
    const Eigen::Matrix2cd target =
        u_rotation(std::acos(rng.uniform(-1.0, 1.0)), rng.uniform(-kPi, kPi),
                   rng.uniform(0.0, 2 * kPi));
    const auto a = ideal_two_gate_angles(target);
    const std::vector<PulseCommand> pulses{{0, a[0], a[1]}, {0, a[2], a[3]}};
    if (fidelity(predicted_sequence_unitary(pulses, ideal_model()), target) < 1.0 - 1e-10)
      failure = "two-pulse decomposition fell short";
  }

  report("invariants: POVM completeness, normalization, fidelity bounds, "
         "round trips, decomposition existence (10k/10k/10k/10k/1k draws)",
         failure);
}

// --- 5: readout error bars are honest ---------------------------------------

void criterion_readout_coverage() {
  const ReadoutErrors truth{0.01, 0.03};
  NoiseContext ctx = NoiseContext::ideal(1);
  ctx.readout[0] = truth;
  Circuit bright;
  Circuit dark;
  dark.prep = {GateRef::fixed_gate((Eigen::Matrix2cd() << 0, 1, 1, 0).finished())};

  const long long n = 100000;
  const int runs = 1000;
  int cover = 0;
  for (int r = 0; r < runs; ++r) {
    Rng rng(50000 + r);
    Rng rb = rng.child(0), rd = rng.child(1);
    const auto cb = sample_counts(bright, ctx, n, rb);
    const auto cd = sample_counts(dark, ctx, n, rd);
    const ReadoutEstimate e = estimate_readout_errors(
        static_cast<double>(cb[0]), static_cast<double>(cb[1]),
        static_cast<double>(cd[0]), static_cast<double>(cd[1]));
    if (std::abs(e.errors.e10 - truth.e10) <= 3.0 * e.stderr_e10 &&
        std::abs(e.errors.e01 - truth.e01) <= 3.0 * e.stderr_e01)
      ++cover;
  }
  std::optional<std::string> failure;
  if (cover < 980)
    failure = "3-sigma coverage " + std::to_string(cover) + "/1000, need >= 980";
  report("readout calibration: 3-sigma intervals cover the truth in >= 98% of "
         "1000 runs at N=1e5",
         failure);
}

// --- 6: cross-talk compensation ----------------------------------------------

void criterion_crosstalk() {
  std::optional<std::string> failure;

  // ideal models: compensation is exact
  {
    CrossTalkModel ct;
    ct.target = ideal_model();
    ct.neighbor = default_neighbor_model(0.0, 0.0);
    const Eigen::Matrix2cd u1 = u_rotation(1.1, -0.3, 2.4);
    const SequencePlan plan =
        compensate_crosstalk(u1, Eigen::Matrix2cd::Identity(), ct, ct);
    if (plan.predicted_fidelity < 1.0 - 1e-10)
      failure = "ideal-model compensation fidelity " +
                std::to_string(plan.predicted_fidelity);
  }

  // full campaign with ground-truth models at epsilon = 0.01
  if (!failure) {
    ExperimentConfig cfg;
    cfg.name = "crosstalk";
    cfg.seed = 1;
    cfg.trials = 100;
    cfg.shots = {};
    failure = check_crosstalk(run_crosstalk(cfg));
  }

  report("crosstalk: exact compensation for ideal models; joint fidelity >= "
         "1 - 1e-6 in >= 95/100 perturbed trials",
         failure);
}

// --- 7: byte-level determinism of the CLI ------------------------------------

void criterion_determinism() {
  std::optional<std::string> failure;
  const std::string out_a = "/tmp/iontomo_acc_a.csv";
  const std::string out_b = "/tmp/iontomo_acc_b.csv";
  const std::string base = std::string(CLI_BIN_PATH) +
                           " fig2b --seed 12 --trials 10 --shots 100,1000 --out ";
  if (std::system((base + out_a + " 2>/dev/null").c_str()) != 0 ||
      std::system((base + out_b + " 2>/dev/null").c_str()) != 0)
    failure = "CLI run failed";
  else if (slurp(out_a).empty() || slurp(out_a) != slurp(out_b))
    failure = "repeated CLI runs are not byte-identical";
  report("determinism: identical seeds give byte-identical CLI output", failure);
}

}  // namespace

int main() {
  criterion_fig2b_scaling();
  criterion_fig3_gain();
  criterion_exact_recovery();
  criterion_invariants();
  criterion_readout_coverage();
  criterion_crosstalk();
  criterion_determinism();
  if (g_failures > 0) {
    std::cout << g_failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all acceptance criteria passed\n";
  return 0;
}
