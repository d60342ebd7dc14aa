#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "iontomo/experiments.hpp"
#include "iontomo/serialize.hpp"

namespace {

using namespace iontomo;

constexpr int kExitUsage = 2;
constexpr int kExitEstimation = 3;
constexpr int kExitCheck = 4;

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<std::string> shots;  // comma list or "exact"
  std::optional<double> epsilon;
  std::optional<double> e10, e01;
  std::optional<double> beta, gamma;
  std::optional<std::string> out;
  bool check = false;
};

void add_common_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "JSON config file");
  cmd->add_option("--seed", f.seed, "master RNG seed");
  cmd->add_option("--trials", f.trials, "number of Monte Carlo trials");
  cmd->add_option("--shots", f.shots, "comma-separated per-circuit sample sizes, or 'exact'");
  cmd->add_option("--epsilon", f.epsilon, "gate parameter error rate");
  cmd->add_option("--e10", f.e10, "readout error P(1|bright)");
  cmd->add_option("--e01", f.e01, "readout error P(0|dark)");
  cmd->add_option("--beta", f.beta, "cross-talk neighbor pickup fraction");
  cmd->add_option("--gamma", f.gamma, "cross-talk neighbor offset");
  cmd->add_option("--out", f.out, "output path");
  cmd->add_flag("--check", f.check, "verify campaign thresholds; exit 4 on failure");
}

std::vector<long long> parse_shots(const std::string& s) {
  if (s == "exact") return {};
  std::vector<long long> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t pos = 0;
    const long long v = std::stoll(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument("bad shots entry '" + tok + "'");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty shots list");
  return out;
}

ExperimentConfig build_config(const CommonFlags& f, const ExperimentConfig& defaults) {
  ExperimentConfig cfg = defaults;
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) throw std::invalid_argument("cannot open config file " + f.config_path);
    json j = json::parse(in);
    if (j.contains("name")) cfg.name = j.at("name").get<std::string>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("trials")) cfg.trials = j.at("trials").get<int>();
    if (j.contains("shots")) {
      if (j.at("shots").is_string())
        cfg.shots = parse_shots(j.at("shots").get<std::string>());
      else
        cfg.shots = j.at("shots").get<std::vector<long long>>();
    }
    if (j.contains("epsilon")) cfg.epsilon = j.at("epsilon").get<double>();
    if (j.contains("readout")) cfg.readout = readout_from_json(j.at("readout"));
    if (j.contains("crosstalk_beta")) cfg.crosstalk_beta = j.at("crosstalk_beta").get<double>();
    if (j.contains("crosstalk_gamma")) cfg.crosstalk_gamma = j.at("crosstalk_gamma").get<double>();
    if (j.contains("out")) cfg.out = j.at("out").get<std::string>();
  }
  // flags win over the config file
  if (f.seed) cfg.seed = *f.seed;
  if (f.trials) cfg.trials = *f.trials;
  if (f.shots) cfg.shots = parse_shots(*f.shots);
  if (f.epsilon) cfg.epsilon = *f.epsilon;
  if (f.e10) cfg.readout.e10 = *f.e10;
  if (f.e01) cfg.readout.e01 = *f.e01;
  if (f.beta) cfg.crosstalk_beta = *f.beta;
  if (f.gamma) cfg.crosstalk_gamma = *f.gamma;
  if (f.out) cfg.out = *f.out;
  validate(cfg);
  return cfg;
}

void write_file(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output path " + path);
  out << content;
}

int finish_check(const std::optional<std::string>& failure) {
  if (failure) {
    std::cerr << "check failed: " << *failure << "\n";
    return kExitCheck;
  }
  std::cerr << "check passed\n";
  return 0;
}

int cmd_readout_calib(const CommonFlags& f) {
  ExperimentConfig defaults;
  defaults.name = "readout-calib";
  defaults.shots = {100000};
  const ExperimentConfig cfg = build_config(f, defaults);
  const ReadoutCalibResult res = run_readout_calib(cfg);
  json report = to_json(res.estimate.errors);
  report["stderr"] = {res.estimate.stderr_e10, res.estimate.stderr_e01};
  report["ci3sigma"] = {3.0 * res.estimate.stderr_e10, 3.0 * res.estimate.stderr_e01};
  report["shots"] = res.shots;
  report["exact"] = res.exact;
  write_file(cfg.out, report.dump(2) + "\n");
  if (f.check) return finish_check(check_readout_calib(res, cfg.readout));
  return 0;
}

int cmd_fig2b(const CommonFlags& f) {
  ExperimentConfig defaults;
  defaults.name = "fig2b";
  defaults.shots = {100, 1000, 10000, 100000};
  const ExperimentConfig cfg = build_config(f, defaults);
  const Fig2bResult res = run_fig2b(cfg);
  write_file(cfg.out, to_csv(res));
  if (f.check) return finish_check(check_fig2b(res));
  return 0;
}

int cmd_fig3(const CommonFlags& f) {
  ExperimentConfig defaults;
  defaults.name = "fig3";
  defaults.shots = {1000, 10000, 100000};
  const ExperimentConfig cfg = build_config(f, defaults);
  const Fig3Result res = run_fig3(cfg);
  write_file(cfg.out, to_csv(res));
  if (!cfg.out.empty() && cfg.out != "-") {
    std::string summary_path = cfg.out;
    const auto dot = summary_path.rfind('.');
    summary_path.insert(dot == std::string::npos ? summary_path.size() : dot, "_summary");
    write_file(summary_path, summary_csv(res));
  }
  if (f.check) return finish_check(check_fig3(res));
  return 0;
}

int cmd_crosstalk(const CommonFlags& f) {
  ExperimentConfig defaults;
  defaults.name = "crosstalk";
  defaults.trials = 100;
  const ExperimentConfig cfg = build_config(f, defaults);  // exact mode by default
  const CrossTalkResult res = run_crosstalk(cfg);
  write_file(cfg.out, to_csv(res));
  if (f.check) return finish_check(check_crosstalk(res));
  return 0;
}

struct PipelineFlags {
  std::string task;
  std::string dataset_path;
  std::string readout_path;
  std::string qtgates_path;
  std::string out;
};

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return json::parse(in);
}

int cmd_pipeline(const PipelineFlags& f) {
  const TomographyDataset ds = dataset_from_json(load_json(f.dataset_path));
  json result;
  if (f.task == "readout") {
    if (ds.circuits.size() != 2)
      throw ParseError("readout task expects a 2-circuit dataset (bright, dark)");
    const ReadoutEstimate est =
        estimate_readout_errors(ds.circuits[0].counts[0], ds.circuits[0].counts[1],
                                ds.circuits[1].counts[0], ds.circuits[1].counts[1]);
    result = to_json(est.errors);
    result["stderr"] = {est.stderr_e10, est.stderr_e01};
  } else if (f.task == "qtgates") {
    if (f.readout_path.empty()) throw ParseError("qtgates task requires --readout");
    const ReadoutErrors readout = readout_from_json(load_json(f.readout_path));
    result = to_json(estimate_qt_gates(ds, readout));
  } else if (f.task == "tomography") {
    if (f.readout_path.empty()) throw ParseError("tomography task requires --readout");
    const ReadoutErrors readout = readout_from_json(load_json(f.readout_path));
    QtGateParams qt;
    if (!f.qtgates_path.empty()) qt = qt_params_from_json(load_json(f.qtgates_path));
    result = to_json(process_tomography_mle(ds, readout, qt));
  } else {
    throw std::invalid_argument("unknown pipeline task '" + f.task + "'");
  }
  write_file(f.out, result.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"trapped-ion gate error simulation, tomography, and calibration"};
  app.require_subcommand(1);

  CommonFlags readout_f, fig2b_f, fig3_f, ct_f;
  add_common_flags(app.add_subcommand("readout-calib", "simulate and estimate readout errors"),
                   readout_f);
  add_common_flags(
      app.add_subcommand("fig2b", "QT-gate estimation accuracy vs per-circuit sample size"),
      fig2b_f);
  add_common_flags(
      app.add_subcommand("fig3", "calibrated two-gate synthesis vs the standard model"), fig3_f);
  add_common_flags(app.add_subcommand("crosstalk", "two-ion cross-talk compensation campaign"),
                   ct_f);

  PipelineFlags pf;
  CLI::App* pipeline =
      app.add_subcommand("pipeline", "run estimators on stored JSON datasets");
  pipeline->add_option("--task", pf.task, "readout | qtgates | tomography")->required();
  pipeline->add_option("--dataset", pf.dataset_path, "dataset JSON file")->required();
  pipeline->add_option("--readout", pf.readout_path, "readout errors JSON file");
  pipeline->add_option("--qtgates", pf.qtgates_path, "QT gate parameters JSON file");
  pipeline->add_option("--out", pf.out, "output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (app.got_subcommand("readout-calib")) return cmd_readout_calib(readout_f);
    if (app.got_subcommand("fig2b")) return cmd_fig2b(fig2b_f);
    if (app.got_subcommand("fig3")) return cmd_fig3(fig3_f);
    if (app.got_subcommand("crosstalk")) return cmd_crosstalk(ct_f);
    if (app.got_subcommand("pipeline")) return cmd_pipeline(pf);
  } catch (const EstimationError& e) {
    std::cerr << "estimation failed: " << e.what() << "\n";
    return kExitEstimation;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return 0;
}
