#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <vector>

#include "iontomo/noise.hpp"
#include "iontomo/qmath.hpp"
#include "iontomo/rng.hpp"

namespace iontomo {

struct GateRef {
  enum class Kind { Identity, SqrtX, X, SqrtY, Pulse, AddressedPulse, Fixed };

  Kind kind = Kind::Identity;
  int qubit = 0;               // AddressedPulse only
  double phi = 0.0;            // Pulse / AddressedPulse
  double delta = 0.0;          // Pulse / AddressedPulse
  Eigen::MatrixXcd fixed;      // Fixed only (2x2 or 4x4)

  static GateRef identity() { return {}; }
  static GateRef sqrt_x() { return {Kind::SqrtX}; }
  static GateRef x() { return {Kind::X}; }
  static GateRef sqrt_y() { return {Kind::SqrtY}; }
  static GateRef pulse(double phi, double delta) {
    GateRef g{Kind::Pulse};
    g.phi = phi;
    g.delta = delta;
    return g;
  }
  static GateRef addressed(int qubit, double phi, double delta) {
    GateRef g{Kind::AddressedPulse};
    g.qubit = qubit;
    g.phi = phi;
    g.delta = delta;
    return g;
  }
  static GateRef fixed_gate(const Eigen::MatrixXcd& u) {
    GateRef g{Kind::Fixed};
    g.fixed = u;
    return g;
  }
};

// prep applied to |0...0>, then meas basis-change gates, then z-readout.
struct Circuit {
  int n_qubits = 1;
  std::vector<GateRef> prep;
  std::vector<GateRef> meas;
};

// Ground-truth (or candidate) noise model realizing abstract gates as unitaries.
struct NoiseContext {
  int n_qubits = 1;
  std::vector<ReadoutErrors> readout{ReadoutErrors{}};    // per qubit
  std::vector<QtGateParams> qt{QtGateParams{}};           // per qubit
  LinearGateModel gate_model = ideal_model();             // single-qubit Pulse
  std::array<CrossTalkModel, 2> crosstalk{};              // AddressedPulse, per addressed qubit

  static NoiseContext ideal(int n_qubits = 1);
};

// Outcome counts of one circuit. In exact mode counts are Born probabilities
// and shots = 1.
struct CircuitCounts {
  std::vector<double> counts;
  double shots = 0.0;
};

struct TomographyDataset {
  std::vector<CircuitCounts> circuits;
  bool exact = false;
};

// Concrete unitary for a gate under the context. SqrtX -> U(a,0,b),
// X -> U(a,0,b)^2, SqrtY -> Z(c) U(a,0,b) Z(-c), Pulse -> realized via the
// linear model, AddressedPulse -> tensor of target and neighbor effects.
Eigen::MatrixXcd realize_gate(const GateRef& g, const NoiseContext& ctx);

// Born-rule outcome probabilities (length 2^n_qubits, qubit 0 is the high bit)
// under per-qubit POVM readout. Sums to 1 to 1e-12.
Eigen::VectorXd exact_probabilities(const Circuit& c, const NoiseContext& ctx);

std::vector<long long> sample_counts(const Circuit& c, const NoiseContext& ctx,
                                     long long shots, Rng& rng);

// One draw per circuit from split child streams; shots = nullopt selects exact
// (infinite-statistics) mode.
TomographyDataset run_protocol(const std::vector<Circuit>& circuits, const NoiseContext& ctx,
                               std::optional<long long> shots, Rng rng);

}  // namespace iontomo
