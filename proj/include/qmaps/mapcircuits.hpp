#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qmaps/fixedpoint.hpp"
#include "qmaps/gates.hpp"

namespace qmaps {

// Quantized area-preserving maps on the torus, evolved one kick period at a
// time:  Q = F . Q_eta . F^dag . Q_theta, with
//   Q_theta |j> = prod_m exp(2 pi i beta_m j^m) |j>,
//       beta_m = -K f_m (2 pi)^{p-2} / (L N^{p-1}),
//   Q_eta = exp(2 pi i beta_eta j^2),  beta_eta = -L / (2N),
//   F = discrete Fourier transform (position <-> momentum),
// where N = 2^{n_q}, the f_m expand the kick potential around the grid
// offset delta_theta, and K, L set kick strength and torus winding.
enum class MapKind { Sawtooth, DoubleWell };

struct MapConfig {
    MapKind map = MapKind::Sawtooth;
    int n_q = 4;
    int L = 2;
    double K = 0.04;
    double a = 1.6;  // double-well only: potential (y^2 - a^2)^2
    // Grid offset; the default centers the coordinate grid on zero.
    // delta_theta() resolves the default (1 - N) / 2 when unset.
    bool has_delta_theta = false;
    double delta_theta_value = 0.0;

    double delta_theta() const;
    std::uint64_t N() const { return std::uint64_t{1} << n_q; }
};

// Kick potential P(y) = sum_m f_m y^m expanded around delta_theta
// (the constant term is dropped; it is a global phase).
//   sawtooth     P(y) = -y^2/2          -> f2 = -1/2, f1 = -delta
//   double well  P(y) = (y^2 - a^2)^2   -> f4 = 1, f3 = 4 delta,
//                                          f2 = 6 delta^2 - 2 a^2,
//                                          f1 = 4 delta (delta^2 - a^2)
struct PolynomialPotential {
    int p = 0;                  // degree
    std::vector<double> f;      // f[m] for m = 1..p; f[0] unused, kept 0
};

PolynomialPotential potential_coefficients(const MapConfig& cfg);

// Multiset partitions of n into exactly k positive parts, each sorted
// descending, enumerated in a fixed deterministic order.
std::vector<std::vector<int>> partitions(int n, int k);

// Exact phase (turns, mod 1) of the collected multi-controlled gate on wire
// set J for the diagonal exp(2 pi i beta x^p):
//   phi(J) = beta * sum over count vectors (c_1..c_k), c_i >= 1,
//            sum c_i = p, of  p! / prod(c_i!) * 2^{sum c_i J_i}
// accumulated in 128-bit fixed point so the huge powers of two wrap mod 1
// without precision loss.  J must be sorted, distinct, |J| <= p.
FixedPointPhase collected_phase(const std::vector<int>& J, int p,
                                const FixedPointPhase& beta);

// Number of collected gates for an n_q-wire register and exponent p:
//   sum_{k=1}^{min(n_q,p)} C(n_q, k)
// (versus n_q^p per-tuple gates before collection).
std::uint64_t collected_gate_count(int n_q, int p);

// One collected MultiControlledPhase per nonempty wire set J with
// |J| <= min(n_q, p), J sets in lexicographic order; realizes
// diag(exp(2 pi i beta x^p)) exactly.
std::vector<MultiControlledPhase> exponentiation_circuit(const FixedPointPhase& beta,
                                                         int p, int n_q);

// Swap-free Fourier circuit on n_q wires: n_q Hadamards and
// n_q (n_q - 1) / 2 controlled phases realizing F composed with the
// bit-reversal permutation B (circuit matrix times B equals the DFT matrix).
// Diagonal circuits executed between the two Fourier halves must have their
// wire sets mirrored (j -> n_q - 1 - j), which this module does internally.
struct QftCircuit {
    std::vector<Gate> gates;
    bool bit_reversed = true;  // permutation recorded: output wire j holds bit n_q-1-j
};

QftCircuit qft_circuit(int n_q);

// Compiled hardware circuit plus bookkeeping used by theory and the harness.
struct CompiledCircuit {
    std::vector<Gate> gates;
    int n_system = 0;          // system wires (ancilla excluded)
    bool uses_ancilla = false; // ancilla wire index = n_system when used
    std::size_t n1 = 0;        // one-qubit unitaries per recorded period
    std::size_t n2 = 0;        // two-qubit unitaries per recorded period
    std::vector<std::size_t> step_boundaries;  // end index of each map step

    int total_wires() const { return n_system + (uses_ancilla ? 1 : 0); }
    std::size_t n_g() const { return n1 + n2; }
    bool has_measurement() const;
};

// One full map step over the hardware alphabet, in time order:
//   Q_theta gates, inverse Fourier half, mirrored momentum diagonal,
//   Fourier half.
// Collected Q_theta phases merge all monomial degrees per wire set (one
// multi-controlled gate per J, phase accumulated over m in [|J|, p]).
// A double-well register with n_q >= 4 allocates one ancilla wire; the
// sawtooth (and n_q = 3 double-well) never does.
CompiledCircuit map_step_circuit(const MapConfig& cfg, Decomposition strategy);

// H (x) I (x) H^{(x)(n_q - 2)} |0>, read most-significant wire first: H on
// wire n_q - 1, identity on wire n_q - 2, H on the rest.  An allocated
// ancilla wire stays |0>.
StateVector initial_state(const CompiledCircuit& circuit);

// Debug/golden dump: header lines with the map configuration and counts,
// then one gate per line, "KIND wire[,wire] phase_hex" where phase_hex is
// the 128-bit fixed-point turns image of the stored phase (R/CR only).
void dump_circuit(std::ostream& os, const CompiledCircuit& circuit,
                  const MapConfig& cfg, Decomposition strategy);
std::string dump_circuit_string(const CompiledCircuit& circuit, const MapConfig& cfg,
                                Decomposition strategy);

const char* map_name(MapKind m);
const char* decomposition_name(Decomposition d);

}  // namespace qmaps
