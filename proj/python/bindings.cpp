#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "iontomo/calib.hpp"
#include "iontomo/experiments.hpp"
#include "iontomo/noise.hpp"
#include "iontomo/qmath.hpp"
#include "iontomo/sim.hpp"
#include "iontomo/tomo.hpp"

namespace py = pybind11;
using namespace iontomo;

namespace {

NoiseContext make_context(const ReadoutErrors& readout, const QtGateParams& qt,
                          const LinearGateModel& model) {
  NoiseContext ctx;
  ctx.readout = {readout};
  ctx.qt = {qt};
  ctx.gate_model = model;
  return ctx;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "trapped-ion gate error simulation, tomography, and calibration";

  py::class_<RotationParams>(m, "RotationParams")
      .def(py::init<>())
      .def(py::init([](double theta, double phi, double delta) {
             return RotationParams{theta, phi, delta};
           }),
           py::arg("theta"), py::arg("phi"), py::arg("delta"))
      .def_readwrite("theta", &RotationParams::theta)
      .def_readwrite("phi", &RotationParams::phi)
      .def_readwrite("delta", &RotationParams::delta)
      .def("__repr__", [](const RotationParams& p) {
        return "RotationParams(theta=" + std::to_string(p.theta) +
               ", phi=" + std::to_string(p.phi) + ", delta=" + std::to_string(p.delta) + ")";
      });

  m.def("u_rotation",
        py::overload_cast<double, double, double>(&u_rotation),
        py::arg("theta"), py::arg("phi"), py::arg("delta"));
  m.def("u_rotation", py::overload_cast<const RotationParams&>(&u_rotation), py::arg("params"));
  m.def("z_rotation", &z_rotation, py::arg("delta"));
  m.def("unitary_to_rotation", &unitary_to_rotation, py::arg("u"));
  m.def("fidelity", &fidelity, py::arg("u"), py::arg("v"));
  m.def("tensor", &tensor, py::arg("a"), py::arg("b"));
  m.def("apply", &apply, py::arg("u"), py::arg("rho"));

  py::class_<ReadoutErrors>(m, "ReadoutErrors")
      .def(py::init<>())
      .def(py::init([](double e10, double e01) { return ReadoutErrors{e10, e01}; }),
           py::arg("e10"), py::arg("e01"))
      .def_readwrite("e10", &ReadoutErrors::e10)
      .def_readwrite("e01", &ReadoutErrors::e01);

  py::class_<LinearGateModel>(m, "LinearGateModel")
      .def(py::init<>())
      .def(py::init([](const Eigen::Matrix3d& a) { return LinearGateModel{a}; }), py::arg("a"))
      .def_readwrite("a", &LinearGateModel::a);

  py::class_<CrossTalkModel>(m, "CrossTalkModel")
      .def(py::init<>())
      .def(py::init([](const LinearGateModel& t, const LinearGateModel& n) {
             return CrossTalkModel{t, n};
           }),
           py::arg("target"), py::arg("neighbor"))
      .def_readwrite("target", &CrossTalkModel::target)
      .def_readwrite("neighbor", &CrossTalkModel::neighbor);

  py::class_<QtGateParams>(m, "QtGateParams")
      .def(py::init<>())
      .def(py::init([](double a, double b, double c) { return QtGateParams{a, b, c}; }),
           py::arg("a"), py::arg("b"), py::arg("c"))
      .def_readwrite("a", &QtGateParams::a)
      .def_readwrite("b", &QtGateParams::b)
      .def_readwrite("c", &QtGateParams::c);

  m.def("readout_povm", &readout_povm, py::arg("errors"));
  m.def("ideal_model", &ideal_model);
  m.def("default_neighbor_model", &default_neighbor_model, py::arg("beta") = 0.05,
        py::arg("gamma") = 0.0);
  m.def("realized_rotation", &realized_rotation, py::arg("model"), py::arg("phi"),
        py::arg("delta"));
  m.def(
      "random_perturbed_model",
      [](double epsilon, std::uint64_t seed) {
        Rng rng(seed);
        return random_perturbed_model(epsilon, rng);
      },
      py::arg("epsilon"), py::arg("seed"));
  m.def(
      "random_qt_gate_params",
      [](double epsilon, std::uint64_t seed) {
        Rng rng(seed);
        return random_qt_gate_params(epsilon, rng);
      },
      py::arg("epsilon"), py::arg("seed"));
  m.def("crosstalk_effect", &crosstalk_effect, py::arg("model"), py::arg("phi"),
        py::arg("delta"));

  py::class_<GateRef>(m, "GateRef")
      .def_static("identity", &GateRef::identity)
      .def_static("sqrt_x", &GateRef::sqrt_x)
      .def_static("x", &GateRef::x)
      .def_static("sqrt_y", &GateRef::sqrt_y)
      .def_static("pulse", &GateRef::pulse, py::arg("phi"), py::arg("delta"))
      .def_static("addressed", &GateRef::addressed, py::arg("qubit"), py::arg("phi"),
                  py::arg("delta"))
      .def_static("fixed_gate", &GateRef::fixed_gate, py::arg("u"));

  py::class_<Circuit>(m, "Circuit")
      .def(py::init<>())
      .def_readwrite("n_qubits", &Circuit::n_qubits)
      .def_readwrite("prep", &Circuit::prep)
      .def_readwrite("meas", &Circuit::meas);

  py::class_<NoiseContext>(m, "NoiseContext")
      .def(py::init(&make_context), py::arg("readout") = ReadoutErrors{},
           py::arg("qt") = QtGateParams{}, py::arg("gate_model") = ideal_model())
      .def_static("ideal", &NoiseContext::ideal, py::arg("n_qubits") = 1)
      .def_readwrite("n_qubits", &NoiseContext::n_qubits)
      .def_readwrite("readout", &NoiseContext::readout)
      .def_readwrite("qt", &NoiseContext::qt)
      .def_readwrite("gate_model", &NoiseContext::gate_model)
      .def_readwrite("crosstalk", &NoiseContext::crosstalk);

  py::class_<CircuitCounts>(m, "CircuitCounts")
      .def(py::init<>())
      .def_readwrite("counts", &CircuitCounts::counts)
      .def_readwrite("shots", &CircuitCounts::shots);

  py::class_<TomographyDataset>(m, "TomographyDataset")
      .def(py::init<>())
      .def_readwrite("circuits", &TomographyDataset::circuits)
      .def_readwrite("exact", &TomographyDataset::exact);

  m.def("realize_gate", &realize_gate, py::arg("gate"), py::arg("context"));
  m.def("exact_probabilities", &exact_probabilities, py::arg("circuit"), py::arg("context"));
  m.def(
      "sample_counts",
      [](const Circuit& c, const NoiseContext& ctx, long long shots, std::uint64_t seed) {
        Rng rng(seed);
        return sample_counts(c, ctx, shots, rng);
      },
      py::arg("circuit"), py::arg("context"), py::arg("shots"), py::arg("seed"));
  m.def(
      "run_protocol",
      [](const std::vector<Circuit>& cs, const NoiseContext& ctx,
         std::optional<long long> shots, std::uint64_t seed) {
        Rng rng(seed);
        return run_protocol(cs, ctx, shots, rng);
      },
      py::arg("circuits"), py::arg("context"), py::arg("shots"), py::arg("seed"));

  py::class_<ReadoutEstimate>(m, "ReadoutEstimate")
      .def_readonly("errors", &ReadoutEstimate::errors)
      .def_readonly("stderr_e10", &ReadoutEstimate::stderr_e10)
      .def_readonly("stderr_e01", &ReadoutEstimate::stderr_e01);

  m.def("estimate_readout_errors", &estimate_readout_errors, py::arg("bright_n0"),
        py::arg("bright_n1"), py::arg("dark_n0"), py::arg("dark_n1"));
  m.def("qt_gate_circuits", &qt_gate_circuits);
  m.def("standard_protocol_circuits", &standard_protocol_circuits, py::arg("process"));

  py::class_<QtGateEstimate>(m, "QtGateEstimate")
      .def_readonly("params", &QtGateEstimate::params)
      .def_readonly("stderrs", &QtGateEstimate::stderrs)
      .def_readonly("residual", &QtGateEstimate::residual);

  m.def("estimate_qt_gates", &estimate_qt_gates, py::arg("data"), py::arg("readout"));

  py::class_<ProcessEstimate>(m, "ProcessEstimate")
      .def_readonly("unitary", &ProcessEstimate::unitary)
      .def_readonly("params", &ProcessEstimate::params)
      .def_readonly("log_likelihood", &ProcessEstimate::log_likelihood);

  m.def("process_tomography_mle", &process_tomography_mle, py::arg("data"), py::arg("readout"),
        py::arg("qt"), py::arg("init") = std::nullopt);

  py::class_<CalibrationPoint>(m, "CalibrationPoint")
      .def(py::init<>())
      .def_readwrite("phi", &CalibrationPoint::phi)
      .def_readwrite("delta", &CalibrationPoint::delta)
      .def_readwrite("reconstructed", &CalibrationPoint::reconstructed);

  py::class_<PulseCommand>(m, "PulseCommand")
      .def(py::init<>())
      .def_readwrite("qubit", &PulseCommand::qubit)
      .def_readwrite("phi", &PulseCommand::phi)
      .def_readwrite("delta", &PulseCommand::delta);

  py::class_<SequencePlan>(m, "SequencePlan")
      .def_readonly("pulses", &SequencePlan::pulses)
      .def_readonly("predicted", &SequencePlan::predicted)
      .def_readonly("predicted_fidelity", &SequencePlan::predicted_fidelity)
      .def_readonly("met_threshold", &SequencePlan::met_threshold)
      .def_readonly("fidelity_q0", &SequencePlan::fidelity_q0)
      .def_readonly("fidelity_q1", &SequencePlan::fidelity_q1);

  m.def("calibration_commands", &calibration_commands);
  m.def("align_branch", &align_branch, py::arg("estimate"), py::arg("reference"));
  m.def("fit_linear_model", &fit_linear_model, py::arg("calibration"));
  m.def("ideal_two_gate_angles", &ideal_two_gate_angles, py::arg("target"));
  m.def("decompose_two_gate", &decompose_two_gate, py::arg("target"), py::arg("model"));
  m.def("compensate_crosstalk", &compensate_crosstalk, py::arg("u1"), py::arg("u2"),
        py::arg("ct0"), py::arg("ct1"));
  m.def("predicted_sequence_unitary",
        py::overload_cast<const std::vector<PulseCommand>&, const LinearGateModel&>(
            &predicted_sequence_unitary),
        py::arg("pulses"), py::arg("model"));
}
