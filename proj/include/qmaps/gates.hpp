#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qmaps/statevector.hpp"

namespace qmaps {

// Hardware alphabet.  All phases are radians, reduced to (-pi, pi].
//   Hadamard        H = (1/sqrt2) [[1, 1], [1, -1]]
//   Phase           R_phi = diag(1, e^{i phi})
//   ControlledPhase CR_phi = diag(1, 1, 1, e^{i phi})   (symmetric in wires)
//   MeasureReset    projective measurement of an ancilla wire, flip to |0> on
//                   outcome 1; the only non-unitary element.
enum class GateKind { Hadamard, Phase, ControlledPhase, MeasureReset };

struct Gate {
    GateKind kind;
    int q0 = 0;        // target / first wire
    int q1 = 0;        // second wire (ControlledPhase only)
    double phi = 0.0;  // radians in (-pi, pi] (Phase / ControlledPhase)

    static Gate hadamard(int q);
    static Gate phase(int q, double phi);
    static Gate controlled_phase(int qa, int qb, double phi);
    static Gate measure_reset(int q);
};

// Reduces an angle to (-pi, pi].
double reduce_angle(double phi);

// diag phase gate applying e^{i phi} when every wire in `wires` reads 1.
// Wires are sorted, distinct; phi in radians.
struct MultiControlledPhase {
    std::vector<int> wires;
    double phi = 0.0;
};

// Rotation axis on the Bloch sphere; components of a unit vector.
struct BlochAxis {
    double x = 0.0, y = 0.0, z = 0.0;
};

// R_axis(alpha) = cos(alpha/2) I - i sin(alpha/2) (axis . sigma).
// Throws std::invalid_argument if |axis| deviates from 1 beyond 1e-12.
Mat2 bloch_matrix(const BlochAxis& axis, double alpha);

// 2x2 matrix of a one-qubit alphabet gate (Hadamard or Phase).
Mat2 matrix_of(const Gate& g);

enum class Decomposition { AncillaEager, AncillaMin };

// Compiles a multi-controlled phase onto the hardware alphabet.
//
//   |W| = 1 -> Phase
//   |W| = 2 -> ControlledPhase
//   |W| = 3 -> without ancilla: phi.abc = (phi/2)(bc + ac - (a xor b)c),
//              realized with two compiled CNOTs (H CR_pi H) and three
//              controlled phases of +-phi/2;
//              with ancilla (AncillaEager and ancilla given): AND of two
//              wires computed into the ancilla by a Toffoli, one
//              ControlledPhase, uncompute, MeasureReset.
//   |W| = 4 -> Toffoli computes the AND of two wires into the ancilla
//              (required), the |W|=3 ancilla-free construction runs on
//              {ancilla, remaining wires}, uncompute, MeasureReset.
//
// The emitted product, restricted to the ancilla-|0> subspace, equals the
// ideal diagonal exactly; the ancilla returns to |0> and a MeasureReset is
// appended after every ancilla uncompute.
// Throws std::invalid_argument if |W| = 4 and no ancilla is available, or if
// the ancilla collides with a control wire.
std::vector<Gate> compile_multi_controlled(const MultiControlledPhase& mc,
                                           Decomposition strategy,
                                           std::optional<int> ancilla);

// Gate census: n1 = one-qubit unitaries (Hadamard + Phase), n2 = two-qubit
// unitaries (ControlledPhase).  MeasureReset is not a unitary and is excluded.
struct GateCounts {
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    std::size_t n_g() const { return n1 + n2; }
};

GateCounts count_gates(const std::vector<Gate>& gates);

// Applies one alphabet gate to a state (MeasureReset is rejected here; the
// harness owns measurement draws).
void apply_gate(StateVector& psi, const Gate& g);

const char* kind_name(GateKind k);

}  // namespace qmaps
