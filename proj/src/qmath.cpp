#include "iontomo/qmath.hpp"

#include <cmath>
#include <stdexcept>

namespace iontomo {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw std::invalid_argument(std::string("non-finite ") + what);
}

}  // namespace

Eigen::Matrix2cd u_rotation(double theta, double phi, double delta) {
  require_finite(theta, "theta");
  require_finite(phi, "phi");
  require_finite(delta, "delta");
  const double ch = std::cos(delta / 2.0);
  const double sh = std::sin(delta / 2.0);
  const double ct = std::cos(theta);
  const double st = std::sin(theta);
  const complexd i(0.0, 1.0);
  Eigen::Matrix2cd u;
  u(0, 0) = ch - i * ct * sh;
  u(0, 1) = -i * st * std::exp(-i * phi) * sh;
  u(1, 0) = -i * st * std::exp(i * phi) * sh;
  u(1, 1) = ch + i * ct * sh;
  return u;
}

Eigen::Matrix2cd u_rotation(const RotationParams& p) {
  return u_rotation(p.theta, p.phi, p.delta);
}

Eigen::Matrix2cd z_rotation(double delta) { return u_rotation(0.0, 0.0, delta); }

double unitarity_defect(const Eigen::MatrixXcd& u) {
  const Eigen::MatrixXcd d =
      u.adjoint() * u - Eigen::MatrixXcd::Identity(u.cols(), u.cols());
  return d.cwiseAbs().maxCoeff();
}

bool is_unitary(const Eigen::MatrixXcd& u, double tol) {
  return u.rows() == u.cols() && unitarity_defect(u) <= tol;
}

RotationParams unitary_to_rotation(const Eigen::Matrix2cd& u) {
  if (unitarity_defect(u) > 1e-8) throw std::invalid_argument("matrix is not unitary");

  // Strip the global phase: det(e^{-i a} U) = 1.
  const complexd det = u(0, 0) * u(1, 1) - u(0, 1) * u(1, 0);
  const double alpha = 0.5 * std::arg(det);
  const Eigen::Matrix2cd v = std::exp(complexd(0.0, -alpha)) * u;

  // SU(2) quaternion: V = p0 I - i (p1 sx + p2 sy + p3 sz).
  double p0 = 0.5 * std::real(v(0, 0) + v(1, 1));
  double p1 = -0.5 * std::imag(v(0, 1) + v(1, 0));
  double p2 = 0.5 * std::real(v(1, 0) - v(0, 1));
  double p3 = -0.5 * std::imag(v(0, 0) - v(1, 1));

  const double s = std::sqrt(p1 * p1 + p2 * p2 + p3 * p3);
  if (s < 1e-9) return RotationParams{0.0, 0.0, 0.0};  // axis ill-defined

  // Resolve the double cover: make the first significant component of
  // (p0, p3, p1, p2) positive, which lands delta in (0, pi].
  const double tol = 1e-12;
  double lead = p0;
  if (std::abs(lead) <= tol) lead = p3;
  if (std::abs(lead) <= tol) lead = p1;
  if (std::abs(lead) <= tol) lead = p2;
  if (lead < 0.0) {
    p0 = -p0;
    p1 = -p1;
    p2 = -p2;
    p3 = -p3;
  }

  RotationParams out;
  out.delta = 2.0 * std::atan2(s, p0);
  double nz = p3 / s;
  nz = std::min(1.0, std::max(-1.0, nz));
  out.theta = std::acos(nz);
  out.phi = (std::abs(p1) <= tol && std::abs(p2) <= tol) ? 0.0 : std::atan2(p2, p1);
  if (out.phi >= kPi) out.phi -= 2.0 * kPi;  // [-pi, pi)
  if (out.delta >= 2.0 * kPi) out.delta = 0.0;
  return out;
}

double fidelity(const Eigen::MatrixXcd& u, const Eigen::MatrixXcd& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols() || u.rows() != u.cols())
    throw std::invalid_argument("fidelity: dimension mismatch");
  const double d = static_cast<double>(u.rows());
  const double t = std::abs((u.adjoint() * v).trace());
  return std::min(1.0, (t * t) / (d * d));
}

Eigen::Matrix4cd tensor(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Eigen::Matrix4cd out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

Eigen::MatrixXcd apply(const Eigen::MatrixXcd& u, const Eigen::MatrixXcd& rho) {
  if (u.cols() != rho.rows() || rho.rows() != rho.cols())
    throw std::invalid_argument("apply: dimension mismatch");
  return u * rho * u.adjoint();
}

}  // namespace iontomo
