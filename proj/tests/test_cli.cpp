#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "iontomo/serialize.hpp"

#ifndef CLI_BIN_PATH
#error "CLI_BIN_PATH must be defined"
#endif

using namespace iontomo;

namespace {

int run(const std::string& args, const std::string& stderr_path = "/dev/null") {
  const std::string cmd =
      std::string(CLI_BIN_PATH) + " " + args + " 2>" + stderr_path;
  const int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return (status >> 8) & 0xff;  // POSIX exit code
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

}  // namespace

TEST_CASE("readout-calib subcommand") {
  const std::string out = "/tmp/iontomo_test_ro.json";

  SUBCASE("produces a well-formed report and is byte-stable") {
    REQUIRE(run("readout-calib --seed 11 --shots 20000 --out " + out) == 0);
    const std::string first = slurp(out);
    const json j = json::parse(first);
    CHECK(j.contains("e10"));
    CHECK(j.contains("e01"));
    CHECK(j.contains("stderr"));
    CHECK(j.contains("ci3sigma"));
    CHECK(j.at("shots").get<double>() == 20000.0);
    CHECK(std::abs(j.at("e10").get<double>() - 0.01) < 0.005);
    CHECK(std::abs(j.at("e01").get<double>() - 0.03) < 0.005);

    REQUIRE(run("readout-calib --seed 11 --shots 20000 --out " + out) == 0);
    CHECK(slurp(out) == first);  // deterministic reruns
  }

  SUBCASE("exact mode recovers the configured rates and passes --check") {
    CHECK(run("readout-calib --shots exact --e10 0.02 --e01 0.05 --check --out " + out) == 0);
    const json j = json::parse(slurp(out));
    CHECK(j.at("exact").get<bool>());
    CHECK(std::abs(j.at("e10").get<double>() - 0.02) < 1e-12);
    CHECK(std::abs(j.at("e01").get<double>() - 0.05) < 1e-12);
  }
}

TEST_CASE("fig2b subcommand") {
  const std::string out = "/tmp/iontomo_test_fig2b.csv";
  REQUIRE(run("fig2b --seed 3 --trials 8 --shots 100,1000 --out " + out) == 0);
  const std::string csv = slurp(out);
  CHECK(csv.rfind("N,median_infidelity", 0) == 0);  // header row
  std::istringstream lines(csv);
  int n_lines = 0;
  std::string line;
  while (std::getline(lines, line))
    if (!line.empty()) ++n_lines;
  CHECK(n_lines == 3);  // header + one row per shots value

  REQUIRE(run("fig2b --seed 3 --trials 8 --shots 100,1000 --out " + out) == 0);
  CHECK(slurp(out) == csv);
}

TEST_CASE("fig3 subcommand writes trial and summary CSVs") {
  const std::string out = "/tmp/iontomo_test_fig3.csv";
  REQUIRE(run("fig3 --seed 4 --trials 3 --shots 1000 --out " + out) == 0);
  const std::string trials = slurp(out);
  const std::string summary = slurp("/tmp/iontomo_test_fig3_summary.csv");
  CHECK(trials.find("F_reconstructed") != std::string::npos);
  CHECK(summary.find("median_nines_reconstructed") != std::string::npos);
}

TEST_CASE("config file is honored and flags win over it") {
  const std::string cfg = "/tmp/iontomo_test_cfg.json";
  const std::string out1 = "/tmp/iontomo_test_cfg_a.csv";
  const std::string out2 = "/tmp/iontomo_test_cfg_b.csv";
  spit(cfg, json{{"seed", 3}, {"trials", 8}, {"shots", "100,1000"}, {"out", out1}}.dump());

  REQUIRE(run("fig2b --config " + cfg) == 0);
  REQUIRE(run("fig2b --seed 3 --trials 8 --shots 100,1000 --out " + out2) == 0);
  CHECK(slurp(out1) == slurp(out2));

  // flag overrides the config seed, so the output must differ
  REQUIRE(run("fig2b --config " + cfg + " --seed 99 --out " + out2) == 0);
  CHECK(slurp(out1) != slurp(out2));
}

TEST_CASE("pipeline round trip against the in-process estimators") {
  // simulate a QT-gate dataset, dump it, re-estimate through the CLI
  NoiseContext ctx = NoiseContext::ideal(1);
  ctx.readout[0] = ReadoutErrors{0.01, 0.03};
  ctx.qt[0] = QtGateParams{1.56, 1.60, 1.55};
  const TomographyDataset ds = run_protocol(qt_gate_circuits(), ctx, 20000, Rng(77));
  const QtGateEstimate direct = estimate_qt_gates(ds, ctx.readout[0]);

  const std::string ds_path = "/tmp/iontomo_test_ds.json";
  const std::string ro_path = "/tmp/iontomo_test_ro_in.json";
  const std::string out = "/tmp/iontomo_test_qt.json";
  spit(ds_path, to_json(ds).dump());
  spit(ro_path, to_json(ctx.readout[0]).dump());

  REQUIRE(run("pipeline --task qtgates --dataset " + ds_path + " --readout " + ro_path +
              " --out " + out) == 0);
  const json j = json::parse(slurp(out));
  CHECK(j.at("a").get<double>() == direct.params.a);
  CHECK(j.at("b").get<double>() == direct.params.b);
  CHECK(j.at("c").get<double>() == direct.params.c);
  CHECK(std::abs(direct.params.a - 1.56) < 0.05);

  SUBCASE("tomography task agrees with the library call") {
    const RotationParams truth{1.2, 0.4, 2.0};
    NoiseContext pctx = NoiseContext::ideal(1);
    pctx.readout[0] = ReadoutErrors{0.01, 0.03};
    const std::vector<GateRef> process{GateRef::fixed_gate(u_rotation(truth))};
    const TomographyDataset pds =
        run_protocol(standard_protocol_circuits(process), pctx, std::nullopt, Rng(0));
    spit(ds_path, to_json(pds).dump());
    REQUIRE(run("pipeline --task tomography --dataset " + ds_path + " --readout " + ro_path +
                " --out " + out) == 0);
    const json pj = json::parse(slurp(out));
    const ProcessEstimate direct_p = process_tomography_mle(pds, pctx.readout[0], pctx.qt[0]);
    CHECK(pj.at("theta").get<double>() == direct_p.params.theta);
    CHECK(pj.at("phi").get<double>() == direct_p.params.phi);
    CHECK(pj.at("delta").get<double>() == direct_p.params.delta);
    CHECK(fidelity(u_rotation(direct_p.params), u_rotation(truth)) > 1.0 - 1e-8);
  }

  SUBCASE("readout task matches estimate_readout_errors") {
    TomographyDataset cal;
    cal.circuits = {{{990, 10}, 1000}, {{30, 970}, 1000}};
    spit(ds_path, to_json(cal).dump());
    REQUIRE(run("pipeline --task readout --dataset " + ds_path + " --out " + out) == 0);
    const json rj = json::parse(slurp(out));
    CHECK(rj.at("e10").get<double>() == 0.01);
    CHECK(rj.at("e01").get<double>() == 0.03);
  }
}

TEST_CASE("error handling and exit codes") {
  const std::string err = "/tmp/iontomo_test_err.txt";
  const std::string bad = "/tmp/iontomo_test_bad.json";

  SUBCASE("missing dataset field names the field, exit 2") {
    spit(bad, R"([{"circuit_id": 0, "shots": 100}])");
    CHECK(run("pipeline --task readout --dataset " + bad, err) == 2);
    CHECK(slurp(err).find("counts") != std::string::npos);
  }

  SUBCASE("counts not summing to shots, exit 2") {
    spit(bad, R"([{"circuit_id": 0, "counts": [40, 50], "shots": 100},)"
              R"({"circuit_id": 1, "counts": [50, 50], "shots": 100}])");
    CHECK(run("pipeline --task readout --dataset " + bad, err) == 2);
    CHECK(slurp(err).find("sum") != std::string::npos);
  }

  SUBCASE("negative count, exit 2") {
    spit(bad, R"([{"circuit_id": 0, "counts": [-1, 101], "shots": 100},)"
              R"({"circuit_id": 1, "counts": [50, 50], "shots": 100}])");
    CHECK(run("pipeline --task readout --dataset " + bad, err) == 2);
    CHECK(slurp(err).find("negative") != std::string::npos);
  }

  SUBCASE("malformed JSON, exit 2") {
    spit(bad, "{not json");
    CHECK(run("pipeline --task readout --dataset " + bad, err) == 2);
  }

  SUBCASE("unknown pipeline task, exit 2") {
    spit(bad, "[]");
    CHECK(run("pipeline --task nonsense --dataset " + bad, err) == 2);
  }

  SUBCASE("unknown subcommand and bad flag value, exit 2") {
    CHECK(run("frobnicate", err) == 2);
    CHECK(run("fig2b --shots 10x0", err) == 2);
    CHECK(run("fig2b --trials -3", err) == 2);
  }

  SUBCASE("missing config file, exit 2") {
    CHECK(run("fig2b --config /tmp/iontomo_no_such_config.json", err) == 2);
  }

  SUBCASE("invalid readout rates, exit 2") {
    CHECK(run("readout-calib --e10 0.7 --e01 0.6 --shots exact", err) == 2);
  }
}
