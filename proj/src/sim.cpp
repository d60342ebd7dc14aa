#include "iontomo/sim.hpp"

#include <stdexcept>

namespace iontomo {

namespace {

Eigen::Matrix2cd sqrt_x_unitary(const QtGateParams& qt) {
  return u_rotation(qt.a, 0.0, qt.b);
}

Eigen::Matrix2cd sqrt_y_unitary(const QtGateParams& qt) {
  return z_rotation(qt.c) * sqrt_x_unitary(qt) * z_rotation(-qt.c);
}

Eigen::Matrix2cd single_qubit_gate(const GateRef& g, const NoiseContext& ctx, int qubit) {
  const QtGateParams& qt = ctx.qt.at(qubit);
  switch (g.kind) {
    case GateRef::Kind::Identity:
      return Eigen::Matrix2cd::Identity();
    case GateRef::Kind::SqrtX:
      return sqrt_x_unitary(qt);
    case GateRef::Kind::X: {
      const Eigen::Matrix2cd sx = sqrt_x_unitary(qt);
      return sx * sx;
    }
    case GateRef::Kind::SqrtY:
      return sqrt_y_unitary(qt);
    case GateRef::Kind::Pulse:
      return u_rotation(realized_rotation(ctx.gate_model, g.phi, g.delta));
    case GateRef::Kind::Fixed:
      if (g.fixed.rows() != 2 || g.fixed.cols() != 2)
        throw std::invalid_argument("fixed gate has wrong dimension for a 1-qubit circuit");
      return g.fixed;
    default:
      throw std::invalid_argument("gate kind not applicable to a single qubit");
  }
}

}  // namespace

NoiseContext NoiseContext::ideal(int n_qubits) {
  NoiseContext ctx;
  ctx.n_qubits = n_qubits;
  ctx.readout.assign(n_qubits, ReadoutErrors{});
  ctx.qt.assign(n_qubits, QtGateParams{});
  ctx.crosstalk[0].target = ideal_model();
  ctx.crosstalk[0].neighbor = default_neighbor_model(0.0, 0.0);
  ctx.crosstalk[1] = ctx.crosstalk[0];
  return ctx;
}

Eigen::MatrixXcd realize_gate(const GateRef& g, const NoiseContext& ctx) {
  if (ctx.n_qubits == 1) return single_qubit_gate(g, ctx, 0);

  if (ctx.n_qubits != 2) throw std::invalid_argument("only 1 or 2 qubits are supported");
  switch (g.kind) {
    case GateRef::Kind::Identity:
      return Eigen::Matrix4cd::Identity();
    case GateRef::Kind::AddressedPulse: {
      if (g.qubit != 0 && g.qubit != 1)
        throw std::invalid_argument("addressed pulse qubit index must be 0 or 1");
      const CrossTalkModel& ct = ctx.crosstalk.at(g.qubit);
      const auto [tgt, nbr] = crosstalk_effect(ct, g.phi, g.delta);
      const Eigen::Matrix2cd ut = u_rotation(tgt);
      const Eigen::Matrix2cd un = u_rotation(nbr);
      return g.qubit == 0 ? tensor(ut, un) : tensor(un, ut);
    }
    case GateRef::Kind::Fixed:
      if (g.fixed.rows() != 4 || g.fixed.cols() != 4)
        throw std::invalid_argument("fixed gate has wrong dimension for a 2-qubit circuit");
      return g.fixed;
    default:
      throw std::invalid_argument("gate kind not applicable to a 2-qubit circuit");
  }
}

Eigen::VectorXd exact_probabilities(const Circuit& c, const NoiseContext& ctx) {
  if (c.n_qubits != ctx.n_qubits)
    throw std::invalid_argument("circuit/context qubit count mismatch");

  const int dim = 1 << c.n_qubits;
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
  psi(0) = 1.0;  // initialization assumed ideal
  for (const auto& g : c.prep) psi = realize_gate(g, ctx) * psi;
  for (const auto& g : c.meas) psi = realize_gate(g, ctx) * psi;

  // Per-qubit diagonal POVM effects; outcome bit for qubit 0 is the high bit.
  Eigen::VectorXd p(dim);
  for (int k = 0; k < dim; ++k) {
    double pk = 0.0;
    for (int basis = 0; basis < dim; ++basis) {
      double w = std::norm(psi(basis));
      for (int q = 0; q < c.n_qubits; ++q) {
        const int outcome_bit = (k >> (c.n_qubits - 1 - q)) & 1;
        const int state_bit = (basis >> (c.n_qubits - 1 - q)) & 1;
        const ReadoutErrors& e = ctx.readout.at(q);
        const double eff = state_bit == 0 ? (outcome_bit == 0 ? 1.0 - e.e10 : e.e10)
                                          : (outcome_bit == 0 ? e.e01 : 1.0 - e.e01);
        w *= eff;
      }
      pk += w;
    }
    p(k) = pk;
  }
  return p;
}

std::vector<long long> sample_counts(const Circuit& c, const NoiseContext& ctx,
                                     long long shots, Rng& rng) {
  if (shots < 1) throw std::invalid_argument("shots must be >= 1");
  const Eigen::VectorXd p = exact_probabilities(c, ctx);
  return rng.multinomial(std::vector<double>(p.data(), p.data() + p.size()), shots);
}

TomographyDataset run_protocol(const std::vector<Circuit>& circuits, const NoiseContext& ctx,
                               std::optional<long long> shots, Rng rng) {
  TomographyDataset ds;
  ds.exact = !shots.has_value();
  ds.circuits.reserve(circuits.size());
  for (std::size_t i = 0; i < circuits.size(); ++i) {
    CircuitCounts cc;
    if (ds.exact) {
      const Eigen::VectorXd p = exact_probabilities(circuits[i], ctx);
      cc.counts.assign(p.data(), p.data() + p.size());
      cc.shots = 1.0;
    } else {
      Rng stream = rng.child(i);
      const auto counts = sample_counts(circuits[i], ctx, *shots, stream);
      cc.counts.assign(counts.begin(), counts.end());
      cc.shots = static_cast<double>(*shots);
    }
    ds.circuits.push_back(std::move(cc));
  }
  return ds;
}

}  // namespace iontomo
