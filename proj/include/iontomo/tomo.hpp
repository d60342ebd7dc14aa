#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <vector>

#include "iontomo/sim.hpp"

namespace iontomo {

struct EstimationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ReadoutEstimate {
  ReadoutErrors errors;
  double stderr_e10 = 0.0;  // binomial standard errors
  double stderr_e01 = 0.0;
};

// bright = (n0, n1) from |0>-prepared runs, dark = (n0, n1) from dark-state runs.
// e10_hat = n1_bright / N_bright, e01_hat = n0_dark / N_dark.
ReadoutEstimate estimate_readout_errors(double bright_n0, double bright_n1,
                                        double dark_n0, double dark_n1);

// Four single-qubit circuits over {SqrtX, SqrtY} making (a, b, c) identifiable:
// [SqrtX], [SqrtX SqrtX], [SqrtX SqrtY], [SqrtY SqrtX] (application order),
// each read out in z. Identifiability (Jacobian rank 3 at the ideal point) is
// asserted by test.
std::vector<Circuit> qt_gate_circuits();

struct QtGateEstimate {
  QtGateParams params;
  std::array<double, 3> stderrs{};  // Fisher-information standard errors
  double residual = 0.0;            // least-squares objective at the optimum
};

// Least squares on outcome frequencies over [0, pi]^3, multistart simplex
// search (ideal point + 4 perturbed starts).
QtGateEstimate estimate_qt_gates(const TomographyDataset& data, const ReadoutErrors& readout);

// 12 circuits: prep in {I, X, SqrtX, SqrtY} (prep-major order), the process
// under test, then basis change in {I, SqrtX, SqrtY} and z-readout.
std::vector<Circuit> standard_protocol_circuits(const std::vector<GateRef>& process);

struct ProcessEstimate {
  Eigen::Matrix2cd unitary;
  RotationParams params;  // canonical
  double log_likelihood = 0.0;
};

// Maximum-likelihood rank-1 (unitary) process tomography under the fuzzy
// prep/measurement model: circuit probabilities are computed with the supplied
// readout errors and QT-gate parameters. `init` seeds the search (defaults to
// the identity process).
ProcessEstimate process_tomography_mle(const TomographyDataset& data,
                                       const ReadoutErrors& readout, const QtGateParams& qt,
                                       std::optional<RotationParams> init = std::nullopt);

}  // namespace iontomo
