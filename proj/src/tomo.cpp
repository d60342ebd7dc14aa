#include "iontomo/tomo.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "iontomo/optim.hpp"

namespace iontomo {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kHalfPi = kPi / 2.0;

NoiseContext candidate_context(const QtGateParams& qt, const ReadoutErrors& readout) {
  NoiseContext ctx;
  ctx.n_qubits = 1;
  ctx.readout = {readout};
  ctx.qt = {qt};
  ctx.gate_model = ideal_model();
  return ctx;
}

std::vector<Eigen::VectorXd> frequencies(const TomographyDataset& data) {
  std::vector<Eigen::VectorXd> freq;
  freq.reserve(data.circuits.size());
  for (const auto& cc : data.circuits) {
    Eigen::VectorXd f(cc.counts.size());
    for (std::size_t k = 0; k < cc.counts.size(); ++k) f(k) = cc.counts[k] / cc.shots;
    freq.push_back(std::move(f));
  }
  return freq;
}

}  // namespace

ReadoutEstimate estimate_readout_errors(double bright_n0, double bright_n1,
                                        double dark_n0, double dark_n1) {
  const double nb = bright_n0 + bright_n1;
  const double nd = dark_n0 + dark_n1;
  if (nb <= 0.0 || nd <= 0.0)
    throw std::invalid_argument("readout calibration totals must be positive");
  if (bright_n0 < 0 || bright_n1 < 0 || dark_n0 < 0 || dark_n1 < 0)
    throw std::invalid_argument("readout calibration counts must be non-negative");
  ReadoutEstimate est;
  est.errors.e10 = bright_n1 / nb;
  est.errors.e01 = dark_n0 / nd;
  est.stderr_e10 = std::sqrt(est.errors.e10 * (1.0 - est.errors.e10) / nb);
  est.stderr_e01 = std::sqrt(est.errors.e01 * (1.0 - est.errors.e01) / nd);
  return est;
}

std::vector<Circuit> qt_gate_circuits() {
  std::vector<Circuit> cs(4);
  cs[0].prep = {GateRef::sqrt_x()};
  cs[1].prep = {GateRef::sqrt_x(), GateRef::sqrt_x()};
  cs[2].prep = {GateRef::sqrt_x(), GateRef::sqrt_y()};
  cs[3].prep = {GateRef::sqrt_y(), GateRef::sqrt_x()};
  return cs;
}

QtGateEstimate estimate_qt_gates(const TomographyDataset& data, const ReadoutErrors& readout) {
  const auto circuits = qt_gate_circuits();
  if (data.circuits.size() != circuits.size())
    throw std::invalid_argument("dataset is not aligned with qt_gate_circuits");
  const auto freq = frequencies(data);

  const auto residual = [&](const QtGateParams& p) {
    double r = 0.0;
    const NoiseContext ctx = candidate_context(p, readout);
    for (std::size_t i = 0; i < circuits.size(); ++i) {
      const Eigen::VectorXd model = exact_probabilities(circuits[i], ctx);
      r += (freq[i] - model).squaredNorm();
    }
    return r;
  };

  const Eigen::Vector3d lo = Eigen::Vector3d::Zero();
  const Eigen::Vector3d hi = Eigen::Vector3d::Constant(kPi);
  const Objective obj = clip_to_box(
      [&](const Eigen::VectorXd& x) {
        return residual(QtGateParams{x(0), x(1), x(2)});
      },
      lo, hi);

  std::vector<Eigen::VectorXd> starts;
  starts.push_back(Eigen::Vector3d::Constant(kHalfPi));
  starts.push_back(Eigen::Vector3d(kHalfPi + 0.3, kHalfPi - 0.3, kHalfPi));
  starts.push_back(Eigen::Vector3d(kHalfPi - 0.3, kHalfPi + 0.3, kHalfPi - 0.3));
  starts.push_back(Eigen::Vector3d(kHalfPi + 0.3, kHalfPi + 0.3, kHalfPi + 0.3));
  starts.push_back(Eigen::Vector3d(kHalfPi - 0.3, kHalfPi - 0.3, kHalfPi + 0.3));

  NelderMeadOptions opt;
  opt.init_step = 0.15;
  opt.restarts = 4;
  const OptimResult best = multistart_nelder_mead(obj, starts, opt);
  if (!best.converged)
    throw EstimationError("QT gate estimation did not converge after " +
                          std::to_string(best.evals) + " objective evaluations");

  const Eigen::VectorXd x = best.x.cwiseMax(lo).cwiseMin(hi);
  QtGateEstimate est;
  est.params = QtGateParams{x(0), x(1), x(2)};
  est.residual = best.f;

  // Multinomial Fisher information at the optimum via central differences.
  const double h = 1e-6;
  Eigen::Matrix3d info = Eigen::Matrix3d::Zero();
  for (std::size_t i = 0; i < circuits.size(); ++i) {
    const double shots = data.circuits[i].shots;
    const NoiseContext ctx0 = candidate_context(est.params, readout);
    const Eigen::VectorXd p0 = exact_probabilities(circuits[i], ctx0);
    const auto field = [](QtGateParams& q, int d) -> double& {
      return d == 0 ? q.a : d == 1 ? q.b : q.c;
    };
    Eigen::MatrixXd jac(p0.size(), 3);
    for (int d = 0; d < 3; ++d) {
      QtGateParams pp = est.params, pm = est.params;
      field(pp, d) += h;
      field(pm, d) -= h;
      const Eigen::VectorXd fp = exact_probabilities(circuits[i], candidate_context(pp, readout));
      const Eigen::VectorXd fm = exact_probabilities(circuits[i], candidate_context(pm, readout));
      jac.col(d) = (fp - fm) / (2.0 * h);
    }
    for (int k = 0; k < p0.size(); ++k) {
      const double pk = std::max(p0(k), 1e-12);
      info += shots / pk * jac.row(k).transpose() * jac.row(k);
    }
  }
  const Eigen::Matrix3d cov = info.ldlt().solve(Eigen::Matrix3d::Identity());
  for (int d = 0; d < 3; ++d) est.stderrs[d] = std::sqrt(std::max(0.0, cov(d, d)));
  return est;
}

std::vector<Circuit> standard_protocol_circuits(const std::vector<GateRef>& process) {
  const std::vector<std::vector<GateRef>> preps = {
      {}, {GateRef::x()}, {GateRef::sqrt_x()}, {GateRef::sqrt_y()}};
  const std::vector<std::vector<GateRef>> bases = {
      {}, {GateRef::sqrt_x()}, {GateRef::sqrt_y()}};
  std::vector<Circuit> cs;
  cs.reserve(preps.size() * bases.size());
  for (const auto& prep : preps) {
    for (const auto& basis : bases) {
      Circuit c;
      c.prep = prep;
      c.prep.insert(c.prep.end(), process.begin(), process.end());
      c.meas = basis;
      cs.push_back(std::move(c));
    }
  }
  return cs;
}

ProcessEstimate process_tomography_mle(const TomographyDataset& data,
                                       const ReadoutErrors& readout, const QtGateParams& qt,
                                       std::optional<RotationParams> init) {
  const std::size_t n_circuits = 12;
  if (data.circuits.size() != n_circuits)
    throw std::invalid_argument("dataset is not aligned with the 12-circuit standard protocol");

  const NoiseContext ctx = candidate_context(qt, readout);
  const auto neg_loglik = [&](const RotationParams& p) {
    const auto circuits =
        standard_protocol_circuits({GateRef::fixed_gate(u_rotation(p))});
    double nll = 0.0;
    for (std::size_t i = 0; i < circuits.size(); ++i) {
      const Eigen::VectorXd model = exact_probabilities(circuits[i], ctx);
      for (int k = 0; k < model.size(); ++k) {
        const double nk = data.circuits[i].counts[k];
        if (nk > 0.0) nll -= nk * std::log(std::max(model(k), 1e-300));
      }
    }
    return nll;
  };

  const Objective obj = [&](const Eigen::VectorXd& x) {
    return neg_loglik(RotationParams{x(0), x(1), x(2)});
  };

  const RotationParams g = init.value_or(RotationParams{0.0, 0.0, 0.0});
  std::vector<Eigen::VectorXd> starts;
  starts.push_back(Eigen::Vector3d(g.theta, g.phi, g.delta));
  starts.push_back(Eigen::Vector3d(g.theta + 0.4, g.phi + 0.4, g.delta - 0.4));
  starts.push_back(Eigen::Vector3d(g.theta - 0.4, g.phi - 0.4, g.delta + 0.4));
  starts.push_back(Eigen::Vector3d(g.theta + 0.4, g.phi - 0.4, g.delta + 0.4));
  starts.push_back(Eigen::Vector3d(g.theta - 0.4, g.phi + 0.4, g.delta - 0.4));

  // Coarse lattice scan guards the trigonometric multimodality when the
  // initial guess is far from the optimum.
  std::vector<std::pair<double, Eigen::Vector3d>> scan;
  for (double t : {kPi / 4.0, kHalfPi, 3.0 * kPi / 4.0})
    for (double p : {-3.0 * kPi / 4.0, -kPi / 4.0, kPi / 4.0, 3.0 * kPi / 4.0})
      for (double d : {kPi / 4.0, 3.0 * kPi / 4.0, 5.0 * kPi / 4.0, 7.0 * kPi / 4.0}) {
        const Eigen::Vector3d x(t, p, d);
        scan.emplace_back(obj(x), x);
      }
  std::stable_sort(scan.begin(), scan.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  for (int i = 0; i < 3 && i < static_cast<int>(scan.size()); ++i)
    starts.push_back(scan[i].second);

  NelderMeadOptions opt;
  opt.init_step = 0.2;
  opt.restarts = 4;
  const OptimResult best = multistart_nelder_mead(obj, starts, opt);
  if (!best.converged)
    throw EstimationError("process tomography MLE did not converge");

  ProcessEstimate est;
  est.unitary = u_rotation(best.x(0), best.x(1), best.x(2));
  est.params = unitary_to_rotation(est.unitary);
  est.log_likelihood = -best.f;
  return est;
}

}  // namespace iontomo
