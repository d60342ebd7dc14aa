#pragma once

#include <array>
#include <vector>

#include "iontomo/noise.hpp"
#include "iontomo/sim.hpp"

namespace iontomo {

struct CalibrationPoint {
  double phi = 0.0;             // commanded
  double delta = 0.0;
  RotationParams reconstructed; // canonical tomography output
};

using CalibrationSet = std::vector<CalibrationPoint>;

// The four commanded calibration gates used throughout:
// (pi/4, pi/2), (pi/4, pi), (3pi/4, pi/2), (3pi/4, pi).
CalibrationSet calibration_commands();

struct PulseCommand {
  int qubit = 0;
  double phi = 0.0;
  double delta = 0.0;
};

struct SequencePlan {
  std::vector<PulseCommand> pulses;
  Eigen::MatrixXcd predicted;        // achieved unitary under the planning model
  double predicted_fidelity = 0.0;   // vs the target, Eq.-(4) style |Tr|^2/d^2
  bool met_threshold = true;
  // cross-talk plans only: per-qubit factor fidelities
  double fidelity_q0 = 1.0;
  double fidelity_q1 = 1.0;
};

// Maps est to the equivalent representative (theta, phi, delta) or
// (pi - theta, phi +- pi, 2pi - delta), with phi/delta shifted by multiples of
// 2pi, closest to ref in Euclidean angle distance.
RotationParams align_branch(const RotationParams& est, const RotationParams& ref);

// Row-wise linear least squares of the affine model on a calibration set;
// reconstructed angles are branch-aligned against the ideal-model prediction
// first. Throws std::invalid_argument on a rank-deficient design.
LinearGateModel fit_linear_model(const CalibrationSet& cal);

// Closed-form two-equatorial-rotation decomposition under the ideal model:
// R_phi2(d2) R_phi1(d1) = target up to phase. Returns (phi1, d1, phi2, d2).
std::array<double, 4> ideal_two_gate_angles(const Eigen::Matrix2cd& target);

// Two commanded pulses maximizing fidelity of the realized product vs target
// under model m; initialized from the ideal closed form, polished by simplex
// search. met_threshold is cleared when predicted fidelity < 1 - 1e-8.
SequencePlan decompose_two_gate(const Eigen::Matrix2cd& target, const LinearGateModel& m);

// Four addressed pulses (qubits 0,1,0,1) maximizing joint d=4 fidelity of the
// achieved product vs u1 (x) u2; ct0/ct1 govern pulses addressed to qubit 0/1.
SequencePlan compensate_crosstalk(const Eigen::Matrix2cd& u1, const Eigen::Matrix2cd& u2,
                                  const CrossTalkModel& ct0, const CrossTalkModel& ct1);

// Ordered product of realized pulses. Single-qubit overload ignores qubit
// indices; two-qubit overload realizes each pulse through the model of its
// addressed qubit.
Eigen::Matrix2cd predicted_sequence_unitary(const std::vector<PulseCommand>& pulses,
                                            const LinearGateModel& m);
Eigen::Matrix4cd predicted_sequence_unitary(const std::vector<PulseCommand>& pulses,
                                            const CrossTalkModel& ct0, const CrossTalkModel& ct1);

// Per-qubit factors of the (tensor-structured) achieved two-qubit product.
std::pair<Eigen::Matrix2cd, Eigen::Matrix2cd> sequence_factors(
    const std::vector<PulseCommand>& pulses, const CrossTalkModel& ct0,
    const CrossTalkModel& ct1);

}  // namespace iontomo
