#pragma once

#include <Eigen/Dense>
#include <complex>

namespace iontomo {

using complexd = std::complex<double>;

// Bloch-sphere rotation: axis spherical angles (theta, phi), rotation angle delta.
// Canonical ranges after extraction: theta in [0, pi], phi in [-pi, pi), delta in [0, 2pi).
struct RotationParams {
  double theta = 0.0;
  double phi = 0.0;
  double delta = 0.0;
};

// 2x2 rotation unitary
//   [ cos(d/2) - i cos(t) sin(d/2)      -i sin(t) e^{-i p} sin(d/2) ]
//   [ -i sin(t) e^{+i p} sin(d/2)       cos(d/2) + i cos(t) sin(d/2) ]
// Any finite angles are accepted; throws std::invalid_argument on non-finite input.
Eigen::Matrix2cd u_rotation(double theta, double phi, double delta);
Eigen::Matrix2cd u_rotation(const RotationParams& p);

// Z(delta) = u_rotation(0, 0, delta) = diag(e^{-i d/2}, e^{+i d/2}).
Eigen::Matrix2cd z_rotation(double delta);

// max |(U^dag U - I)_ij|
double unitarity_defect(const Eigen::MatrixXcd& u);
bool is_unitary(const Eigen::MatrixXcd& u, double tol = 1e-8);

// Canonical axis/angle extraction, inverse of u_rotation up to global phase.
// Branch: delta in [0, pi] with the axis sign fixed deterministically; when the
// rotation is (close to) identity, theta = phi = 0 and delta = 0.
// Throws std::invalid_argument if u is not unitary to 1e-8.
RotationParams unitary_to_rotation(const Eigen::Matrix2cd& u);

// F = |Tr(U^dag V)|^2 / d^2. Global-phase invariant, symmetric, in [0, 1].
double fidelity(const Eigen::MatrixXcd& u, const Eigen::MatrixXcd& v);

// Kronecker product, qubit-0 factor first (|q0 q1>, q0 is the high bit).
Eigen::Matrix4cd tensor(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b);

// U rho U^dag
Eigen::MatrixXcd apply(const Eigen::MatrixXcd& u, const Eigen::MatrixXcd& rho);

}  // namespace iontomo
