#pragma once

#include <Eigen/Dense>
#include <utility>

#include "iontomo/qmath.hpp"
#include "iontomo/rng.hpp"

namespace iontomo {

// Classical bit-flip readout errors: e10 = P(read "1" | bright), e01 = P(read "0" | dark).
struct ReadoutErrors {
  double e10 = 0.0;
  double e01 = 0.0;
};

void validate(const ReadoutErrors& e);  // throws std::invalid_argument

// Affine map from commanded pulse parameters (phi, delta) to realized rotation
// parameters: (theta_r, phi_r, delta_r) = a * (phi, delta, 1)^T.
struct LinearGateModel {
  Eigen::Matrix3d a = Eigen::Matrix3d::Zero();
};

// Cross-talk of an addressed pulse: effect on the addressed qubit and on its neighbor.
struct CrossTalkModel {
  LinearGateModel target;
  LinearGateModel neighbor;
};

// SqrtX modeled as U(a, 0, b); c is the relative phase of SqrtY = Z(c) SqrtX Z(-c).
struct QtGateParams {
  double a = 1.5707963267948966;
  double b = 1.5707963267948966;
  double c = 1.5707963267948966;
};

// POVM effects (P0, P1): P0 = (1-e10)|0><0| + e01|1><1|, P1 = I - P0 exactly.
std::pair<Eigen::Matrix2cd, Eigen::Matrix2cd> readout_povm(const ReadoutErrors& e);

// [[0,0,pi/2],[1,0,0],[0,1,0]]: commanded (phi, delta) realized exactly as an
// equatorial rotation R_phi(delta).
LinearGateModel ideal_model();

// Default ground-truth neighbor model: a weak copy of the drive, rotation angle
// scaled by beta (rows [[0,0,pi/2],[1,0,0],[0,beta,gamma]]).
LinearGateModel default_neighbor_model(double beta = 0.05, double gamma = 0.0);

// Raw model output, no range reduction.
RotationParams realized_rotation(const LinearGateModel& m, double phi, double delta);

// ideal matrix + epsilon * (i.i.d. standard normals), row-major draw order
LinearGateModel random_perturbed_model(double epsilon, Rng& rng);
LinearGateModel random_perturbed_model(const LinearGateModel& base, double epsilon, Rng& rng);

// (a, b, c) = pi/2 + epsilon * N, clamped to [0, pi] with a warning on stderr
// if a draw lands outside.
QtGateParams random_qt_gate_params(double epsilon, Rng& rng);

// Realized rotations of one addressed pulse: (target effect, neighbor effect).
std::pair<RotationParams, RotationParams> crosstalk_effect(const CrossTalkModel& ct,
                                                           double phi, double delta);

}  // namespace iontomo
