#include "iontomo/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <sstream>
#include <thread>

namespace iontomo {

namespace {

constexpr double kPi = 3.14159265358979323846;

RotationParams random_rotation_params(Rng& rng) {
  RotationParams p;
  p.theta = std::acos(rng.uniform(-1.0, 1.0));  // axis uniform on the sphere
  p.phi = rng.uniform(-kPi, kPi);
  p.delta = rng.uniform(0.0, 2.0 * kPi);
  return p;
}

// Tomograph a single-qubit process (given as a fixed unitary) through the
// 12-circuit standard protocol and return the canonical estimate.
RotationParams tomograph_process(const Eigen::Matrix2cd& process, const ReadoutErrors& readout,
                                 std::optional<long long> shots, const RotationParams& init,
                                 Rng stream) {
  NoiseContext ctx;
  ctx.readout = {readout};
  const auto circuits = standard_protocol_circuits({GateRef::fixed_gate(process)});
  const TomographyDataset ds = run_protocol(circuits, ctx, shots, stream);
  return process_tomography_mle(ds, readout, QtGateParams{}, init).params;
}

}  // namespace

void validate(const ExperimentConfig& cfg) {
  if (cfg.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (cfg.epsilon < 0.0) throw std::invalid_argument("epsilon must be >= 0");
  for (long long s : cfg.shots)
    if (s < 1) throw std::invalid_argument("shots must be >= 1");
  validate(cfg.readout);
}

double nines(double f) {
  const double infid = std::max(1.0 - f, 1e-16);
  return -std::log10(infid);
}

double median(std::vector<double> v) { return quantile(std::move(v), 0.5); }

double quantile(std::vector<double> v, double q) {
  if (v.empty()) throw std::invalid_argument("quantile of empty sample");
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return v[lo] * (1.0 - frac) + v[hi] * frac;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return buf;
}

void parallel_for(int n, const std::function<void(int)>& fn) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const int workers = static_cast<int>(std::min<unsigned>(hw, static_cast<unsigned>(n)));
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      try {
        for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

ReadoutCalibResult run_readout_calib(const ExperimentConfig& cfg) {
  validate(cfg);
  const bool exact = cfg.shots.empty();
  const std::optional<long long> shots =
      exact ? std::nullopt : std::optional<long long>(cfg.shots.front());

  NoiseContext ctx;
  ctx.readout = {cfg.readout};
  Circuit bright;  // initialize |0> and read out
  Circuit dark;    // dark state prepared directly (cooling laser off)
  Eigen::Matrix2cd flip;
  flip << 0, 1, 1, 0;
  dark.prep = {GateRef::fixed_gate(flip)};

  Rng rng(cfg.seed);
  const TomographyDataset ds = run_protocol({bright, dark}, ctx, shots, rng);
  ReadoutCalibResult res;
  res.exact = exact;
  res.shots = ds.circuits[0].shots;
  res.estimate = estimate_readout_errors(ds.circuits[0].counts[0], ds.circuits[0].counts[1],
                                         ds.circuits[1].counts[0], ds.circuits[1].counts[1]);
  return res;
}

Fig2bResult run_fig2b(const ExperimentConfig& cfg) {
  validate(cfg);
  const bool exact = cfg.shots.empty();
  const std::size_t n_shots = exact ? 1 : cfg.shots.size();
  const Rng base(cfg.seed);

  Fig2bResult res;
  res.infidelities.assign(n_shots, std::vector<double>(cfg.trials, 0.0));
  for (std::size_t si = 0; si < n_shots; ++si) {
    const std::optional<long long> shots =
        exact ? std::nullopt : std::optional<long long>(cfg.shots[si]);
    parallel_for(cfg.trials, [&, si](int t) {
      // model material is per-trial so every N sees the same ground truth
      Rng trial = base.child(static_cast<std::uint64_t>(t));
      Rng model_rng = trial.child(0);
      const QtGateParams truth = random_qt_gate_params(cfg.epsilon, model_rng);

      NoiseContext ctx;
      ctx.readout = {cfg.readout};
      ctx.qt = {truth};
      const TomographyDataset ds =
          run_protocol(qt_gate_circuits(), ctx, shots, trial.child(2 + si));
      const QtGateEstimate est = estimate_qt_gates(ds, cfg.readout);

      const Eigen::Matrix2cd sx_hat = u_rotation(est.params.a, 0.0, est.params.b);
      const Eigen::Matrix2cd sx_true = u_rotation(truth.a, 0.0, truth.b);
      res.infidelities[si][t] = 1.0 - fidelity(sx_hat, sx_true);
    });

    Fig2bRow row;
    row.shots = exact ? 0 : cfg.shots[si];
    row.median_infidelity = median(res.infidelities[si]);
    row.q25 = quantile(res.infidelities[si], 0.25);
    row.q75 = quantile(res.infidelities[si], 0.75);
    res.rows.push_back(row);
  }
  return res;
}

Fig3Result run_fig3(const ExperimentConfig& cfg) {
  validate(cfg);
  const bool exact = cfg.shots.empty();
  const std::size_t n_shots = exact ? 1 : cfg.shots.size();
  const Rng base(cfg.seed);
  const CalibrationSet commands = calibration_commands();

  Fig3Result res;
  res.trials.resize(n_shots * cfg.trials);
  for (std::size_t si = 0; si < n_shots; ++si) {
    const std::optional<long long> shots =
        exact ? std::nullopt : std::optional<long long>(cfg.shots[si]);
    parallel_for(cfg.trials, [&, si](int t) {
      Rng trial = base.child(static_cast<std::uint64_t>(t));
      Rng model_rng = trial.child(0);
      const LinearGateModel m_true = random_perturbed_model(cfg.epsilon, model_rng);
      Rng target_rng = trial.child(1);
      const Eigen::Matrix2cd target = u_rotation(random_rotation_params(target_rng));

      NoiseContext ctx;
      ctx.readout = {cfg.readout};
      ctx.gate_model = m_true;

      CalibrationSet cal = commands;
      Rng sample_rng = trial.child(2 + si);
      for (std::size_t i = 0; i < cal.size(); ++i) {
        const auto circuits =
            standard_protocol_circuits({GateRef::pulse(cal[i].phi, cal[i].delta)});
        const TomographyDataset ds = run_protocol(circuits, ctx, shots, sample_rng.child(i));
        const RotationParams init = realized_rotation(ideal_model(), cal[i].phi, cal[i].delta);
        cal[i].reconstructed =
            process_tomography_mle(ds, cfg.readout, QtGateParams{}, init).params;
      }

      const LinearGateModel m_hat = fit_linear_model(cal);
      const SequencePlan plan_rec = decompose_two_gate(target, m_hat);
      const SequencePlan plan_std = decompose_two_gate(target, ideal_model());

      Fig3Trial row;
      row.shots = exact ? 0 : cfg.shots[si];
      row.trial = t;
      row.f_reconstructed =
          fidelity(predicted_sequence_unitary(plan_rec.pulses, m_true), target);
      row.f_standard = fidelity(predicted_sequence_unitary(plan_std.pulses, m_true), target);
      res.trials[si * cfg.trials + t] = row;
    });

    std::vector<double> f_rec, f_std, n_rec, n_std;
    for (int t = 0; t < cfg.trials; ++t) {
      const Fig3Trial& row = res.trials[si * cfg.trials + t];
      f_rec.push_back(row.f_reconstructed);
      f_std.push_back(row.f_standard);
      n_rec.push_back(nines(row.f_reconstructed));
      n_std.push_back(nines(row.f_standard));
    }
    Fig3Summary s;
    s.shots = exact ? 0 : cfg.shots[si];
    s.median_f_reconstructed = median(f_rec);
    s.median_f_standard = median(f_std);
    s.median_nines_reconstructed = median(n_rec);
    s.median_nines_standard = median(n_std);
    res.summaries.push_back(s);
  }
  return res;
}

CrossTalkResult run_crosstalk(const ExperimentConfig& cfg) {
  validate(cfg);
  const bool exact = cfg.shots.empty();
  const std::size_t n_shots = exact ? 1 : cfg.shots.size();
  const Rng base(cfg.seed);
  const CalibrationSet commands = calibration_commands();
  const LinearGateModel neighbor_base =
      default_neighbor_model(cfg.crosstalk_beta, cfg.crosstalk_gamma);

  CrossTalkResult res;
  res.trials.resize(n_shots * cfg.trials);
  for (std::size_t si = 0; si < n_shots; ++si) {
    const std::optional<long long> shots =
        exact ? std::nullopt : std::optional<long long>(cfg.shots[si]);
    parallel_for(cfg.trials, [&, si](int t) {
      Rng trial = base.child(static_cast<std::uint64_t>(t));
      Rng model_rng = trial.child(0);
      std::array<CrossTalkModel, 2> truth;
      for (auto& ct : truth) {
        ct.target = random_perturbed_model(cfg.epsilon, model_rng);
        ct.neighbor = random_perturbed_model(neighbor_base, cfg.epsilon, model_rng);
      }
      Rng target_rng = trial.child(1);
      const Eigen::Matrix2cd u1 = u_rotation(random_rotation_params(target_rng));
      const Eigen::Matrix2cd u2 = Eigen::Matrix2cd::Identity();

      // QT model per qubit: tomograph the target effect on the addressed qubit
      // and the stray effect on its neighbor, for each calibration command.
      Rng sample_rng = trial.child(2 + si);
      std::array<CrossTalkModel, 2> fitted;
      for (int q = 0; q < 2; ++q) {
        CalibrationSet cal_target = commands;
        CalibrationSet cal_neighbor = commands;
        for (std::size_t i = 0; i < commands.size(); ++i) {
          const auto [tgt, nbr] = crosstalk_effect(truth[q], commands[i].phi, commands[i].delta);
          const RotationParams init_t =
              realized_rotation(ideal_model(), commands[i].phi, commands[i].delta);
          cal_target[i].reconstructed =
              tomograph_process(u_rotation(tgt), cfg.readout, shots, init_t,
                                sample_rng.child(4 * q + 2 * i));
          const RotationParams init_n =
              RotationParams{kPi / 2.0, commands[i].phi, 0.0};
          cal_neighbor[i].reconstructed =
              tomograph_process(u_rotation(nbr), cfg.readout, shots, init_n,
                                sample_rng.child(4 * q + 2 * i + 1));
        }
        fitted[q].target = fit_linear_model(cal_target);
        fitted[q].neighbor = fit_linear_model(cal_neighbor);
      }

      const SequencePlan plan = compensate_crosstalk(u1, u2, fitted[0], fitted[1]);

      CrossTalkTrial row;
      row.shots = exact ? 0 : cfg.shots[si];
      row.trial = t;
      const Eigen::Matrix4cd achieved =
          predicted_sequence_unitary(plan.pulses, truth[0], truth[1]);
      row.joint_f = fidelity(achieved, tensor(u1, u2));
      const auto [f0, f1] = sequence_factors(plan.pulses, truth[0], truth[1]);
      row.q0_f = fidelity(f0, u1);
      row.q1_f = fidelity(f1, u2);
      res.trials[si * cfg.trials + t] = row;
    });
  }
  return res;
}

std::optional<std::string> check_fig2b(const Fig2bResult& r) {
  if (r.rows.size() == 1 && r.rows[0].shots == 0) {
    for (const auto& per_n : r.infidelities)
      for (double infid : per_n)
        if (infid > 1e-10)
          return "exact-mode infidelity " + format_double(infid) + " exceeds 1e-10";
    return std::nullopt;
  }
  if (r.rows.size() < 2) return std::string("need at least two sample sizes for the scaling check");
  for (std::size_t i = 1; i < r.rows.size(); ++i)
    if (!(r.rows[i].median_infidelity < r.rows[i - 1].median_infidelity))
      return "median infidelity is not strictly decreasing in N";
  // least-squares slope of log(median) vs log(N)
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(r.rows.size());
  for (const auto& row : r.rows) {
    const double x = std::log10(static_cast<double>(row.shots));
    const double y = std::log10(row.median_infidelity);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  if (slope < -1.15 || slope > -0.85)
    return "log-log slope " + format_double(slope) + " outside [-1.15, -0.85]";
  return std::nullopt;
}

std::optional<std::string> check_fig3(const Fig3Result& r) {
  if (r.summaries.size() == 1 && r.summaries[0].shots == 0) {
    for (const auto& row : r.trials)
      if (row.f_reconstructed < 1.0 - 1e-8)
        return "exact-mode reconstructed fidelity " + format_double(row.f_reconstructed) +
               " below 1 - 1e-8";
    return std::nullopt;
  }
  for (const auto& s : r.summaries) {
    if (s.shots == 10000 && s.median_nines_reconstructed < 3.5)
      return "median nines at N=1e4 is " + format_double(s.median_nines_reconstructed) +
             " < 3.5";
    if (!(s.median_f_reconstructed > s.median_f_standard))
      return "reconstructed-model median does not exceed standard-model median at N=" +
             std::to_string(s.shots);
  }
  return std::nullopt;
}

std::optional<std::string> check_crosstalk(const CrossTalkResult& r) {
  int ok = 0;
  for (const auto& row : r.trials)
    if (row.joint_f >= 1.0 - 1e-6) ++ok;
  const double frac = static_cast<double>(ok) / static_cast<double>(r.trials.size());
  if (frac < 0.95)
    return "only " + format_double(100.0 * frac) + "% of trials reached joint F >= 1 - 1e-6";
  return std::nullopt;
}

std::optional<std::string> check_readout_calib(const ReadoutCalibResult& r,
                                               const ReadoutErrors& truth) {
  if (r.exact) {
    if (std::abs(r.estimate.errors.e10 - truth.e10) > 1e-12 ||
        std::abs(r.estimate.errors.e01 - truth.e01) > 1e-12)
      return std::string("exact-mode readout estimate does not match the configured errors");
    return std::nullopt;
  }
  const double s10 = std::sqrt(truth.e10 * (1.0 - truth.e10) / r.shots);
  const double s01 = std::sqrt(truth.e01 * (1.0 - truth.e01) / r.shots);
  if (std::abs(r.estimate.errors.e10 - truth.e10) > 5.0 * s10 ||
      std::abs(r.estimate.errors.e01 - truth.e01) > 5.0 * s01)
    return std::string("readout estimate deviates from truth by more than 5 sigma");
  return std::nullopt;
}

std::string to_csv(const Fig2bResult& r) {
  std::ostringstream out;
  out << "N,median_infidelity,q25,q75\n";
  for (const auto& row : r.rows) {
    out << (row.shots == 0 ? std::string("exact") : std::to_string(row.shots)) << ','
        << format_double(row.median_infidelity) << ',' << format_double(row.q25) << ','
        << format_double(row.q75) << '\n';
  }
  return out.str();
}

std::string to_csv(const Fig3Result& r) {
  std::ostringstream out;
  out << "N,trial,F_reconstructed,F_standard,nines_reconstructed,nines_standard\n";
  for (const auto& row : r.trials) {
    out << (row.shots == 0 ? std::string("exact") : std::to_string(row.shots)) << ','
        << row.trial << ',' << format_double(row.f_reconstructed) << ','
        << format_double(row.f_standard) << ',' << format_double(nines(row.f_reconstructed))
        << ',' << format_double(nines(row.f_standard)) << '\n';
  }
  return out.str();
}

std::string summary_csv(const Fig3Result& r) {
  std::ostringstream out;
  out << "N,median_nines_reconstructed,median_nines_standard,median_F_reconstructed,"
         "median_F_standard\n";
  for (const auto& s : r.summaries) {
    out << (s.shots == 0 ? std::string("exact") : std::to_string(s.shots)) << ','
        << format_double(s.median_nines_reconstructed) << ','
        << format_double(s.median_nines_standard) << ','
        << format_double(s.median_f_reconstructed) << ','
        << format_double(s.median_f_standard) << '\n';
  }
  return out.str();
}

std::string to_csv(const CrossTalkResult& r) {
  std::ostringstream out;
  out << "N,trial,joint_F,q0_F,q1_F\n";
  for (const auto& row : r.trials) {
    out << (row.shots == 0 ? std::string("exact") : std::to_string(row.shots)) << ','
        << row.trial << ',' << format_double(row.joint_f) << ',' << format_double(row.q0_f)
        << ',' << format_double(row.q1_f) << '\n';
  }
  return out.str();
}

}  // namespace iontomo
