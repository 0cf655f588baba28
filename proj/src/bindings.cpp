// Python face of the simulator: state-vector primitives, compiled map-circuit
// metadata, closed-form decay predictions, the Monte Carlo cell runner, and
// the Haar-moment estimators.  Heavy sweeps stay in the C++ CLI; these
// bindings cover interactive use and the smoke tests.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qmaps/haar.hpp"
#include "qmaps/harness.hpp"
#include "qmaps/mapcircuits.hpp"
#include "qmaps/noise.hpp"
#include "qmaps/rng.hpp"
#include "qmaps/theory.hpp"

namespace py = pybind11;
using namespace qmaps;

namespace {

MapKind parse_map(const std::string& s) {
    if (s == "sawtooth") return MapKind::Sawtooth;
    if (s == "double-well") return MapKind::DoubleWell;
    throw py::value_error("map must be 'sawtooth' or 'double-well', got '" + s + "'");
}

Decomposition parse_decomposition(const std::string& s) {
    if (s == "ancilla-eager") return Decomposition::AncillaEager;
    if (s == "ancilla-min") return Decomposition::AncillaMin;
    throw py::value_error("decomposition must be 'ancilla-eager' or 'ancilla-min'");
}

MapConfig make_config(const std::string& map, int n_q, int L, double K, double a,
                      std::optional<double> delta_theta) {
    MapConfig cfg;
    cfg.map = parse_map(map);
    cfg.n_q = n_q;
    cfg.L = L;
    cfg.K = K;
    cfg.a = a;
    if (delta_theta) {
        cfg.has_delta_theta = true;
        cfg.delta_theta_value = *delta_theta;
    }
    return cfg;
}

py::dict circuit_info(const CompiledCircuit& c) {
    py::dict d;
    d["n_system"] = c.n_system;
    d["total_wires"] = c.total_wires();
    d["uses_ancilla"] = c.uses_ancilla;
    d["n1"] = c.n1;
    d["n2"] = c.n2;
    d["n_g"] = c.n_g();
    d["num_operations"] = c.gates.size();
    d["has_measurement"] = c.has_measurement();
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
    mod.doc() = "Noisy quantum map simulator core";

    py::class_<StateVector>(mod, "StateVector")
        .def_static("basis_state", &StateVector::basis_state, py::arg("n_qubits"),
                    py::arg("label"))
        .def(py::init<int, std::vector<cx>>(), py::arg("n_qubits"), py::arg("amplitudes"))
        .def_property_readonly("n_qubits", &StateVector::n_qubits)
        .def_property_readonly("dim", &StateVector::dim)
        .def("amplitudes",
             [](const StateVector& s) { return s.amplitudes(); })
        .def("norm_sq", &StateVector::norm_sq)
        .def("apply_hadamard", &StateVector::apply_hadamard, py::arg("q"))
        .def("apply_phase", &StateVector::apply_phase, py::arg("q"), py::arg("phi"))
        .def("apply_controlled_phase", &StateVector::apply_controlled_phase, py::arg("q1"),
             py::arg("q2"), py::arg("phi"))
        .def("apply_x", &StateVector::apply_x, py::arg("q"))
        .def("fidelity", &StateVector::fidelity, py::arg("other"))
        .def("measure_qubit", &StateVector::measure_qubit, py::arg("q"), py::arg("u"));

    mod.def(
        "compile_map_step",
        [](const std::string& map, int n_q, int L, double K, double a,
           std::optional<double> delta_theta, const std::string& decomposition) {
            const MapConfig cfg = make_config(map, n_q, L, K, a, delta_theta);
            return circuit_info(map_step_circuit(cfg, parse_decomposition(decomposition)));
        },
        py::arg("map") = "sawtooth", py::arg("n_q") = 8, py::arg("L") = 2,
        py::arg("K") = 0.04, py::arg("a") = 1.6, py::arg("delta_theta") = py::none(),
        py::arg("decomposition") = "ancilla-eager",
        "Compile one map step; returns the gate census and wiring metadata.");

    mod.def(
        "dump_map_step",
        [](const std::string& map, int n_q, int L, double K, double a,
           std::optional<double> delta_theta, const std::string& decomposition) {
            const MapConfig cfg = make_config(map, n_q, L, K, a, delta_theta);
            const Decomposition strategy = parse_decomposition(decomposition);
            return dump_circuit_string(map_step_circuit(cfg, strategy), cfg, strategy);
        },
        py::arg("map") = "sawtooth", py::arg("n_q") = 8, py::arg("L") = 2,
        py::arg("K") = 0.04, py::arg("a") = 1.6, py::arg("delta_theta") = py::none(),
        py::arg("decomposition") = "ancilla-eager",
        "Text dump of the compiled gate list (header plus one gate per line).");

    mod.def("sigma_star_sq", &theory::sigma_star_sq, py::arg("n1_frac"), py::arg("n2_frac"),
            py::arg("epsilon"),
            "Mean per-gate eigenphase variance (w1/4 + 3 w2/16) eps^2 / 12.");
    mod.def("hilbert_factor", &theory::hilbert_factor, py::arg("n_q"), "N/(1+N).");
    mod.def("mean_fidelity", &theory::mean_fidelity, py::arg("n_g_total"),
            py::arg("sigma_star_sq"), py::arg("n_q"), "1 - A N_g sigma_star^2.");
    mod.def("fidelity_std_ratio", &theory::fidelity_std_ratio, py::arg("n_q"),
            "Predicted sigma(f)/(1-<f>) = 2^{-n_q/2}.");
    mod.def("fidelity_bound", &theory::fidelity_bound, py::arg("n_g_total"),
            py::arg("epsilon"), "Worst-case loss min(1, N_g^2 eps^2/64).");

    mod.def(
        "predict",
        [](const std::string& map, int n_q, double epsilon, int L, double K, double a,
           const std::string& decomposition) {
            const MapConfig cfg = make_config(map, n_q, L, K, a, std::nullopt);
            const CompiledCircuit circuit =
                map_step_circuit(cfg, parse_decomposition(decomposition));
            const theory::TheoryPrediction p = theory::predict(circuit, epsilon, n_q);
            py::dict d = circuit_info(circuit);
            d["sigma_star_sq"] = p.sigma_star_sq;
            d["A"] = p.A;
            d["gamma_th"] = p.gamma_th;
            d["varsigma_star"] = p.varsigma_star;
            d["bound_coeff"] = p.bound_coeff;
            return d;
        },
        py::arg("map") = "sawtooth", py::arg("n_q") = 8, py::arg("epsilon") = 0.005,
        py::arg("L") = 2, py::arg("K") = 0.04, py::arg("a") = 1.6,
        py::arg("decomposition") = "ancilla-eager",
        "Closed-form decay prediction using the compiled circuit's gate census.");

    mod.def(
        "run_cell",
        [](const std::string& map, int n_q, double epsilon, int steps, int realizations,
           std::uint64_t seed, const std::string& decomposition, int workers, int L,
           double K, double a) {
            harness::SweepCell cell;
            cell.map = make_config(map, n_q, L, K, a, std::nullopt);
            cell.decomposition = parse_decomposition(decomposition);
            cell.epsilon = epsilon;
            cell.master_seed = seed;
            cell.realizations = realizations;
            cell.steps = steps;
            harness::SweepPoint pt;
            {
                py::gil_scoped_release release;
                pt = harness::run_cell(cell, workers);
            }
            py::dict d;
            d["mean_f"] = pt.mean_f;
            d["std_f"] = pt.std_f;
            d["ratio"] = pt.ratio;
            d["gamma_fit"] = pt.gamma_fit;
            d["gamma_se"] = pt.gamma_se;
            d["gamma_th"] = pt.gamma_th;
            d["gamma_ratio"] = pt.gamma_ratio;
            d["ratio_final"] = pt.ratio_final;
            d["fit_ok"] = pt.fit_ok;
            d["n1"] = pt.n1;
            d["n2"] = pt.n2;
            d["wrong_meas_count"] = pt.wrong_cum.empty() ? 0 : pt.wrong_cum.back();
            d["csv"] = harness::csv_string({pt});
            return d;
        },
        py::arg("map") = "sawtooth", py::arg("n_q") = 6, py::arg("epsilon") = 0.005,
        py::arg("steps") = 20, py::arg("realizations") = 50, py::arg("seed") = 42,
        py::arg("decomposition") = "ancilla-eager", py::arg("workers") = 0,
        py::arg("L") = 2, py::arg("K") = 0.04, py::arg("a") = 1.6,
        "Monte Carlo fidelity decay for one cell; returns per-step statistics, the "
        "fitted and predicted per-step rates, and the CSV text.");

    mod.def(
        "forward_backward",
        [](const std::string& map, int n_q, double epsilon, int prefix_steps,
           int realizations, std::uint64_t seed, int workers, int L, double K, double a) {
            const MapConfig cfg = make_config(map, n_q, L, K, a, std::nullopt);
            const CompiledCircuit circuit =
                map_step_circuit(cfg, Decomposition::AncillaMin);
            NoiseConfig noise;
            noise.epsilon = epsilon;
            noise.master_seed = seed;
            harness::ReturnEstimate est;
            {
                py::gil_scoped_release release;
                est = harness::forward_backward_probability(circuit, noise, prefix_steps,
                                                            realizations, workers);
            }
            py::dict d;
            d["mean"] = est.mean;
            d["std_error"] = est.std_error;
            d["realizations"] = est.realizations;
            return d;
        },
        py::arg("map") = "sawtooth", py::arg("n_q") = 6, py::arg("epsilon") = 0.005,
        py::arg("prefix_steps") = 5, py::arg("realizations") = 50, py::arg("seed") = 42,
        py::arg("workers") = 0, py::arg("L") = 2, py::arg("K") = 0.04, py::arg("a") = 1.6,
        "Return probability to |0...0> after prefix_steps noisy map steps and the "
        "adjoint gate list with fresh errors.");

    mod.def("haar_analytic_I2", &haar::analytic_I2, py::arg("eigenphases"),
            "Haar second moment 1 - A (1 - |tr R|^2 / N^2) of a diagonal unitary.");
    mod.def("haar_analytic_J2", &haar::analytic_J2, py::arg("eigenphases"),
            "Orthogonal-pair cross moment (1 - I2)/(N - 1).");
    mod.def(
        "haar_mc",
        [](const std::vector<double>& lambda, std::size_t samples, std::uint64_t seed) {
            RngStream rng(seed, 0x48414152ull);
            const haar::MonteCarloEstimate i2 = haar::mc_I2(lambda, samples, rng);
            const haar::MonteCarloEstimate j2 = haar::mc_J2(lambda, samples, rng);
            py::dict d;
            d["I2"] = i2.mean;
            d["I2_se"] = i2.std_error;
            d["J2"] = j2.mean;
            d["J2_se"] = j2.std_error;
            d["analytic_I2"] = haar::analytic_I2(lambda);
            d["analytic_J2"] = haar::analytic_J2(lambda);
            return d;
        },
        py::arg("eigenphases"), py::arg("samples") = 20000, py::arg("seed") = 7,
        "Monte Carlo I2/J2 estimates with their closed forms.");

    mod.attr("csv_header") = harness::kCsvHeader;
}
