#include "iontomo/noise.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace iontomo {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void validate(const ReadoutErrors& e) {
  if (!(e.e10 >= 0.0 && e.e10 <= 1.0) || !(e.e01 >= 0.0 && e.e01 <= 1.0))
    throw std::invalid_argument("readout errors must lie in [0, 1]");
  if (!(e.e10 + e.e01 < 1.0))
    throw std::invalid_argument("readout errors must satisfy e10 + e01 < 1");
}

std::pair<Eigen::Matrix2cd, Eigen::Matrix2cd> readout_povm(const ReadoutErrors& e) {
  validate(e);
  Eigen::Matrix2cd p0 = Eigen::Matrix2cd::Zero();
  p0(0, 0) = 1.0 - e.e10;
  p0(1, 1) = e.e01;
  Eigen::Matrix2cd p1 = Eigen::Matrix2cd::Identity() - p0;  // completeness exact
  return {p0, p1};
}

LinearGateModel ideal_model() {
  LinearGateModel m;
  m.a << 0.0, 0.0, kPi / 2.0,
         1.0, 0.0, 0.0,
         0.0, 1.0, 0.0;
  return m;
}

LinearGateModel default_neighbor_model(double beta, double gamma) {
  LinearGateModel m;
  m.a << 0.0, 0.0, kPi / 2.0,
         1.0, 0.0, 0.0,
         0.0, beta, gamma;
  return m;
}

RotationParams realized_rotation(const LinearGateModel& m, double phi, double delta) {
  if (!std::isfinite(phi) || !std::isfinite(delta))
    throw std::invalid_argument("non-finite pulse parameters");
  const Eigen::Vector3d v = m.a * Eigen::Vector3d(phi, delta, 1.0);
  return RotationParams{v(0), v(1), v(2)};
}

LinearGateModel random_perturbed_model(const LinearGateModel& base, double epsilon, Rng& rng) {
  if (epsilon < 0.0) throw std::invalid_argument("epsilon must be >= 0");
  LinearGateModel m = base;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) m.a(r, c) += epsilon * rng.normal();
  return m;
}

LinearGateModel random_perturbed_model(double epsilon, Rng& rng) {
  return random_perturbed_model(ideal_model(), epsilon, rng);
}

QtGateParams random_qt_gate_params(double epsilon, Rng& rng) {
  if (epsilon < 0.0) throw std::invalid_argument("epsilon must be >= 0");
  QtGateParams p;
  double* fields[3] = {&p.a, &p.b, &p.c};
  for (double* f : fields) {
    *f = kPi / 2.0 + epsilon * rng.normal();
    if (*f < 0.0 || *f > kPi) {
      std::fprintf(stderr, "warning: QT gate parameter %.6f outside [0, pi], clamping\n", *f);
      *f = std::min(kPi, std::max(0.0, *f));
    }
  }
  return p;
}

std::pair<RotationParams, RotationParams> crosstalk_effect(const CrossTalkModel& ct,
                                                           double phi, double delta) {
  return {realized_rotation(ct.target, phi, delta),
          realized_rotation(ct.neighbor, phi, delta)};
}

}  // namespace iontomo
