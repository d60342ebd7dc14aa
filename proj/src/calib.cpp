#include "iontomo/calib.hpp"

#include <Eigen/QR>
#include <cmath>
#include <limits>

#include "iontomo/optim.hpp"
#include "iontomo/tomo.hpp"

namespace iontomo {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Quaternion {
  double w = 1.0;
  Eigen::Vector3d v = Eigen::Vector3d::Zero();
};

// SU(2) form U = w I - i (v . sigma), global phase stripped via det.
Quaternion to_quaternion(const Eigen::Matrix2cd& u) {
  const complexd det = u(0, 0) * u(1, 1) - u(0, 1) * u(1, 0);
  const double alpha = 0.5 * std::arg(det);
  const Eigen::Matrix2cd s = std::exp(complexd(0.0, -alpha)) * u;
  Quaternion q;
  q.w = 0.5 * std::real(s(0, 0) + s(1, 1));
  q.v(0) = -0.5 * std::imag(s(0, 1) + s(1, 0));
  q.v(1) = 0.5 * std::real(s(1, 0) - s(0, 1));
  q.v(2) = -0.5 * std::imag(s(0, 0) - s(1, 1));
  return q;
}

Quaternion qmul(const Quaternion& a, const Quaternion& b) {
  Quaternion q;
  q.w = a.w * b.w - a.v.dot(b.v);
  q.v = a.w * b.v + b.w * a.v + a.v.cross(b.v);
  return q;
}

Quaternion qconj(const Quaternion& a) { return Quaternion{a.w, -a.v}; }

// (phi, delta) of an equatorial rotation quaternion (|v_z| ~ 0).
std::pair<double, double> equatorial_angles(const Quaternion& q) {
  const double s = std::hypot(q.v(0), q.v(1));
  if (s < 1e-15) return {0.0, 0.0};
  return {std::atan2(q.v(1), q.v(0)), 2.0 * std::atan2(s, q.w)};
}

double shift_near(double x, double ref) {
  return x + 2.0 * kPi * std::round((ref - x) / (2.0 * kPi));
}

}  // namespace

CalibrationSet calibration_commands() {
  CalibrationSet cal(4);
  cal[0].phi = kPi / 4.0;
  cal[0].delta = kPi / 2.0;
  cal[1].phi = kPi / 4.0;
  cal[1].delta = kPi;
  cal[2].phi = 3.0 * kPi / 4.0;
  cal[2].delta = kPi / 2.0;
  cal[3].phi = 3.0 * kPi / 4.0;
  cal[3].delta = kPi;
  return cal;
}

RotationParams align_branch(const RotationParams& est, const RotationParams& ref) {
  const RotationParams flipped{kPi - est.theta, est.phi + kPi, 2.0 * kPi - est.delta};
  RotationParams best;
  double best_dist = std::numeric_limits<double>::infinity();
  for (const RotationParams& cand : {est, flipped}) {
    RotationParams c = cand;
    c.phi = shift_near(c.phi, ref.phi);
    c.delta = shift_near(c.delta, ref.delta);
    const double dist = (c.theta - ref.theta) * (c.theta - ref.theta) +
                        (c.phi - ref.phi) * (c.phi - ref.phi) +
                        (c.delta - ref.delta) * (c.delta - ref.delta);
    if (dist < best_dist) {
      best_dist = dist;
      best = c;
    }
  }
  return best;
}

LinearGateModel fit_linear_model(const CalibrationSet& cal) {
  const int n = static_cast<int>(cal.size());
  if (n < 3) throw std::invalid_argument("calibration set needs at least 3 gates");

  Eigen::MatrixXd design(n, 3);
  Eigen::MatrixXd targets(n, 3);
  const LinearGateModel ideal = ideal_model();
  for (int i = 0; i < n; ++i) {
    design.row(i) << cal[i].phi, cal[i].delta, 1.0;
    const RotationParams ref = realized_rotation(ideal, cal[i].phi, cal[i].delta);
    const RotationParams aligned = align_branch(cal[i].reconstructed, ref);
    targets.row(i) << aligned.theta, aligned.phi, aligned.delta;
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-9);
  if (qr.rank() < 3)
    throw std::invalid_argument(
        "calibration design is rank-deficient: the commanded (phi, delta, 1) rows are not "
        "affinely independent");

  LinearGateModel m;
  for (int row = 0; row < 3; ++row)
    m.a.row(row) = qr.solve(targets.col(row)).transpose();
  return m;
}

std::array<double, 4> ideal_two_gate_angles(const Eigen::Matrix2cd& target) {
  const Quaternion p = to_quaternion(target);
  const double rho = std::hypot(p.v(0), p.v(1));

  double phi1 = 0.0, delta1 = 0.0;
  if (rho < 1e-15) {
    // z-axis rotation (or identity): lead with a pi pulse unless trivial
    if (std::abs(p.v(2)) < 1e-15) return {0.0, 0.0, 0.0, 0.0};
    phi1 = 0.0;
    delta1 = kPi;
  } else {
    // Choose the first axis so the remainder has no z component:
    // cos(d1/2) p_z = sin(d1/2) (p_x sin(phi1) - p_y cos(phi1)).
    const double psi = std::atan2(p.v(1), p.v(0));
    phi1 = psi + kPi / 2.0;
    delta1 = 2.0 * std::atan2(p.v(2), rho);
    if (delta1 < 0.0) delta1 += 2.0 * kPi;
  }

  const double s1 = std::sin(delta1 / 2.0);
  const Quaternion r1{std::cos(delta1 / 2.0),
                      Eigen::Vector3d(s1 * std::cos(phi1), s1 * std::sin(phi1), 0.0)};
  const Quaternion r2 = qmul(p, qconj(r1));
  const auto [phi2, delta2] = equatorial_angles(r2);
  return {phi1, delta1, phi2, delta2};
}

Eigen::Matrix2cd predicted_sequence_unitary(const std::vector<PulseCommand>& pulses,
                                            const LinearGateModel& m) {
  Eigen::Matrix2cd u = Eigen::Matrix2cd::Identity();
  for (const auto& p : pulses) u = u_rotation(realized_rotation(m, p.phi, p.delta)) * u;
  return u;
}

Eigen::Matrix4cd predicted_sequence_unitary(const std::vector<PulseCommand>& pulses,
                                            const CrossTalkModel& ct0,
                                            const CrossTalkModel& ct1) {
  Eigen::Matrix4cd u = Eigen::Matrix4cd::Identity();
  for (const auto& p : pulses) {
    if (p.qubit != 0 && p.qubit != 1)
      throw std::invalid_argument("pulse qubit index must be 0 or 1");
    const CrossTalkModel& ct = p.qubit == 0 ? ct0 : ct1;
    const auto [tgt, nbr] = crosstalk_effect(ct, p.phi, p.delta);
    const Eigen::Matrix2cd ut = u_rotation(tgt);
    const Eigen::Matrix2cd un = u_rotation(nbr);
    u = (p.qubit == 0 ? tensor(ut, un) : tensor(un, ut)) * u;
  }
  return u;
}

SequencePlan decompose_two_gate(const Eigen::Matrix2cd& target, const LinearGateModel& m) {
  if (!is_unitary(target)) throw std::invalid_argument("target is not unitary");

  const auto objective = [&](const Eigen::VectorXd& x) {
    const std::vector<PulseCommand> pulses = {{0, x(0), x(1)}, {0, x(2), x(3)}};
    return 1.0 - fidelity(predicted_sequence_unitary(pulses, m), target);
  };

  const auto ideal = ideal_two_gate_angles(target);
  Eigen::VectorXd x0(4);
  x0 << ideal[0], ideal[1], ideal[2], ideal[3];

  Eigen::VectorXd x = x0;
  double f = objective(x0);
  if (f > 1e-14) {
    std::vector<Eigen::VectorXd> starts = {x0};
    Eigen::VectorXd alt = x0;
    alt(0) += 0.2;
    alt(3) += 0.2;
    starts.push_back(alt);
    NelderMeadOptions opt;
    opt.init_step = 0.1;
    opt.restarts = 5;
    const OptimResult best = multistart_nelder_mead(objective, starts, opt);
    if (best.f < f) {
      x = best.x;
      f = best.f;
    }
  }

  SequencePlan plan;
  plan.pulses = {{0, x(0), x(1)}, {0, x(2), x(3)}};
  plan.predicted = predicted_sequence_unitary(plan.pulses, m);
  plan.predicted_fidelity = 1.0 - f;
  plan.met_threshold = plan.predicted_fidelity >= 1.0 - 1e-8;
  return plan;
}

SequencePlan compensate_crosstalk(const Eigen::Matrix2cd& u1, const Eigen::Matrix2cd& u2,
                                  const CrossTalkModel& ct0, const CrossTalkModel& ct1) {
  if (!is_unitary(u1) || !is_unitary(u2))
    throw std::invalid_argument("targets must be unitary");
  const Eigen::Matrix4cd target = tensor(u1, u2);

  const auto pulses_from = [](const Eigen::VectorXd& x) {
    return std::vector<PulseCommand>{
        {0, x(0), x(1)}, {1, x(2), x(3)}, {0, x(4), x(5)}, {1, x(6), x(7)}};
  };
  const auto objective = [&](const Eigen::VectorXd& x) {
    return 1.0 - fidelity(predicted_sequence_unitary(pulses_from(x), ct0, ct1), target);
  };

  // Interleave the per-qubit ideal two-gate decompositions, cross terms ignored.
  const auto d1 = ideal_two_gate_angles(u1);
  const auto d2 = ideal_two_gate_angles(u2);
  Eigen::VectorXd x0(8);
  x0 << d1[0], d1[1], d2[0], d2[1], d1[2], d1[3], d2[2], d2[3];

  Eigen::VectorXd x = x0;
  double f = objective(x0);
  if (f > 1e-14) {
    std::vector<Eigen::VectorXd> starts = {x0};
    Eigen::VectorXd alt = x0;
    for (int i = 0; i < 8; ++i) alt(i) += (i % 2 == 0 ? 0.05 : -0.05);
    starts.push_back(alt);
    NelderMeadOptions opt;
    opt.init_step = 0.05;
    opt.max_iter = 8000;
    opt.restarts = 8;
    const OptimResult best = multistart_nelder_mead(objective, starts, opt);
    if (best.f < f) {
      x = best.x;
      f = best.f;
    }
  }

  SequencePlan plan;
  plan.pulses = pulses_from(x);
  plan.predicted = predicted_sequence_unitary(plan.pulses, ct0, ct1);
  plan.predicted_fidelity = 1.0 - f;
  plan.met_threshold = plan.predicted_fidelity >= 1.0 - 1e-8;

  const auto [f0, f1] = sequence_factors(plan.pulses, ct0, ct1);
  plan.fidelity_q0 = fidelity(f0, u1);
  plan.fidelity_q1 = fidelity(f1, u2);
  return plan;
}

std::pair<Eigen::Matrix2cd, Eigen::Matrix2cd> sequence_factors(
    const std::vector<PulseCommand>& pulses, const CrossTalkModel& ct0,
    const CrossTalkModel& ct1) {
  // The achieved 4x4 is a tensor product by construction, so the per-qubit
  // factors are the ordered products of the per-qubit effects.
  Eigen::Matrix2cd f0 = Eigen::Matrix2cd::Identity();
  Eigen::Matrix2cd f1 = Eigen::Matrix2cd::Identity();
  for (const auto& p : pulses) {
    const CrossTalkModel& ct = p.qubit == 0 ? ct0 : ct1;
    const auto [tgt, nbr] = crosstalk_effect(ct, p.phi, p.delta);
    if (p.qubit == 0) {
      f0 = u_rotation(tgt) * f0;
      f1 = u_rotation(nbr) * f1;
    } else {
      f0 = u_rotation(nbr) * f0;
      f1 = u_rotation(tgt) * f1;
    }
  }
  return {f0, f1};
}

}  // namespace iontomo
