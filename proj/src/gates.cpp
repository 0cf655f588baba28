#include "qmaps/gates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qmaps {

namespace {
constexpr double pi = 3.14159265358979323846264338327950288;
}

double reduce_angle(double phi) {
    double r = std::remainder(phi, 2.0 * pi);  // [-pi, pi]
    if (r <= -pi) r = pi;
    return r;
}

Gate Gate::hadamard(int q) { return Gate{GateKind::Hadamard, q, 0, 0.0}; }

Gate Gate::phase(int q, double phi) {
    return Gate{GateKind::Phase, q, 0, reduce_angle(phi)};
}

Gate Gate::controlled_phase(int qa, int qb, double phi) {
    if (qa == qb)
        throw std::invalid_argument("controlled_phase: wires must differ");
    if (qa > qb) std::swap(qa, qb);
    return Gate{GateKind::ControlledPhase, qa, qb, reduce_angle(phi)};
}

Gate Gate::measure_reset(int q) { return Gate{GateKind::MeasureReset, q, 0, 0.0}; }

Mat2 bloch_matrix(const BlochAxis& axis, double alpha) {
    const double n2 = axis.x * axis.x + axis.y * axis.y + axis.z * axis.z;
    if (std::abs(n2 - 1.0) > 1e-12)
        throw std::invalid_argument("bloch_matrix: axis is not a unit vector");
    const double c = std::cos(0.5 * alpha);
    const double s = std::sin(0.5 * alpha);
    // cos(a/2) I - i sin(a/2) (x sx + y sy + z sz)
    return Mat2{cx(c, -s * axis.z), cx(-s * axis.y, -s * axis.x),
                cx(s * axis.y, -s * axis.x), cx(c, s * axis.z)};
}

Mat2 matrix_of(const Gate& g) {
    constexpr double inv_sqrt2 = 0.70710678118654752440;
    switch (g.kind) {
        case GateKind::Hadamard:
            return Mat2{cx(inv_sqrt2, 0), cx(inv_sqrt2, 0), cx(inv_sqrt2, 0),
                        cx(-inv_sqrt2, 0)};
        case GateKind::Phase:
            return Mat2{cx(1, 0), cx(0, 0), cx(0, 0), std::polar(1.0, g.phi)};
        default:
            throw std::invalid_argument("matrix_of: gate is not one-qubit unitary");
    }
}

namespace {

void emit_cnot(std::vector<Gate>& out, int control, int target) {
    out.push_back(Gate::hadamard(target));
    out.push_back(Gate::controlled_phase(control, target, pi));
    out.push_back(Gate::hadamard(target));
}

// phi.abc = (phi/2).bc + (phi/2).ac - (phi/2).(a xor b)c, the xor realized by
// conjugating with CNOT(a -> b).
void emit_ccphase_bare(std::vector<Gate>& out, int a, int b, int c, double phi) {
    out.push_back(Gate::controlled_phase(b, c, 0.5 * phi));
    out.push_back(Gate::controlled_phase(a, c, 0.5 * phi));
    emit_cnot(out, a, b);
    out.push_back(Gate::controlled_phase(b, c, -0.5 * phi));
    emit_cnot(out, a, b);
}

// Toffoli(a, b -> t) = H(t) . CCZ(a, b, t) . H(t); self-inverse.
void emit_toffoli(std::vector<Gate>& out, int a, int b, int t) {
    out.push_back(Gate::hadamard(t));
    emit_ccphase_bare(out, a, b, t, pi);
    out.push_back(Gate::hadamard(t));
}

}  // namespace

std::vector<Gate> compile_multi_controlled(const MultiControlledPhase& mc,
                                           Decomposition strategy,
                                           std::optional<int> ancilla) {
    std::vector<int> w = mc.wires;
    std::sort(w.begin(), w.end());
    if (w.empty() || w.size() > 4)
        throw std::invalid_argument("compile_multi_controlled: |W| must be 1..4");
    if (std::adjacent_find(w.begin(), w.end()) != w.end())
        throw std::invalid_argument("compile_multi_controlled: duplicate wires");
    if (ancilla &&
        std::find(w.begin(), w.end(), *ancilla) != w.end())
        throw std::invalid_argument("compile_multi_controlled: ancilla collides with a wire");

    const double phi = mc.phi;
    std::vector<Gate> out;
    switch (w.size()) {
        case 1:
            out.push_back(Gate::phase(w[0], phi));
            break;
        case 2:
            out.push_back(Gate::controlled_phase(w[0], w[1], phi));
            break;
        case 3:
            if (strategy == Decomposition::AncillaEager && ancilla) {
                emit_toffoli(out, w[0], w[1], *ancilla);
                out.push_back(Gate::controlled_phase(*ancilla, w[2], phi));
                emit_toffoli(out, w[0], w[1], *ancilla);
                out.push_back(Gate::measure_reset(*ancilla));
            } else {
                emit_ccphase_bare(out, w[0], w[1], w[2], phi);
            }
            break;
        case 4:
            if (!ancilla)
                throw std::invalid_argument(
                    "compile_multi_controlled: |W| = 4 requires an ancilla wire");
            emit_toffoli(out, w[0], w[1], *ancilla);
            emit_ccphase_bare(out, w[2], w[3], *ancilla, phi);
            emit_toffoli(out, w[0], w[1], *ancilla);
            out.push_back(Gate::measure_reset(*ancilla));
            break;
    }
    return out;
}

GateCounts count_gates(const std::vector<Gate>& gates) {
    GateCounts c;
    for (const Gate& g : gates) {
        switch (g.kind) {
            case GateKind::Hadamard:
            case GateKind::Phase:
                ++c.n1;
                break;
            case GateKind::ControlledPhase:
                ++c.n2;
                break;
            case GateKind::MeasureReset:
                break;
        }
    }
    return c;
}

void apply_gate(StateVector& psi, const Gate& g) {
    switch (g.kind) {
        case GateKind::Hadamard:
            psi.apply_hadamard(g.q0);
            break;
        case GateKind::Phase:
            psi.apply_phase(g.q0, g.phi);
            break;
        case GateKind::ControlledPhase:
            psi.apply_controlled_phase(g.q0, g.q1, g.phi);
            break;
        case GateKind::MeasureReset:
            throw std::invalid_argument("apply_gate: MeasureReset needs a measurement draw");
    }
}

const char* kind_name(GateKind k) {
    switch (k) {
        case GateKind::Hadamard: return "H";
        case GateKind::Phase: return "R";
        case GateKind::ControlledPhase: return "CR";
        case GateKind::MeasureReset: return "MR";
    }
    return "?";
}

}  // namespace qmaps
