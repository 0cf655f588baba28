#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "qmaps/gates.hpp"
#include "qmaps/rng.hpp"

namespace qmaps {

// Unbiased control-error model.  Every unitary gate is followed by a small
// random extra rotation drawn fresh per gate application:
//   Phase           -> extra R_xi on the same wire
//   ControlledPhase -> extra CR_xi on the same pair
//   Hadamard        -> extra Bloch rotation R_mu(xi), mu drawn uniformly in
//                      the plane orthogonal to (x+z)/sqrt2 (the Hadamard
//                      axis): mu = cos(gamma) y + sin(gamma) (x-z)/sqrt2.
// xi is uniform in [-eps/2, eps/2]; gamma uniform in [0, 2pi).
struct NoiseConfig {
    double epsilon = 0.0;
    std::uint64_t master_seed = 0;
    // When set, ideal gate phases are rounded to multiples of this value
    // (finite control resolution).  Error phases stay continuous.
    std::optional<double> atomic_phase;
};

struct ErrorDraw {
    double xi = 0.0;
    double gamma = 0.0;
};

// One element of a noisy gate realization: an alphabet gate or a raw 2x2
// matrix on a wire (the Hadamard error is outside the alphabet).
struct MatrixOp {
    int q = 0;
    Mat2 m{};
};
using NoisyOp = std::variant<Gate, MatrixOp>;

// Eigenphases of an error operator, modulo a global phase.
using ErrorSpectrum = std::vector<double>;

// Deterministic draw for gate occurrence `gate_seq_index` of realization
// `realization`: a pure function of (master_seed, realization,
// gate_seq_index).
ErrorDraw draw_errors(const NoiseConfig& cfg, std::uint64_t realization,
                      std::uint64_t gate_seq_index);

// Uniform in [0, 1) from the same keyed stream (used for measurement
// collapse draws; a MeasureReset occupies its own gate_seq_index and is
// never perturbed, so the streams cannot collide).
double draw_uniform(const NoiseConfig& cfg, std::uint64_t realization,
                    std::uint64_t gate_seq_index);

// Noisy realization of g: the ideal gate followed by its error operation.
// MeasureReset passes through alone (measurement is noiseless here).
std::vector<NoisyOp> perturb(const Gate& g, const ErrorDraw& d);

// Eigenphases of the error operator attached to a gate kind:
//   one-qubit errors  -> {+xi/2, -xi/2}
//   two-qubit errors  -> {0, 0, 0, xi}
ErrorSpectrum error_spectrum(GateKind kind, double xi);

// Population variance of the eigenphase set (invariant under a global shift).
double sigma_lambda_sq(const ErrorSpectrum& spectrum);

// Distance of the error operator from the closest global phase:
//   varsigma = min over chi of max_j |1 - e^{i(chi + lambda_j)}|
// computed exactly from the smallest arc containing the phase set: if that
// arc has radius r, varsigma = 2 sin(r/2).  Throws std::domain_error if the
// phases cannot be contained in a half circle (not a small error).
double varsigma(const ErrorSpectrum& spectrum);

// Rounds phases of Phase/ControlledPhase gates to multiples of delta.
std::vector<Gate> quantize_phases(const std::vector<Gate>& gates, double delta);

}  // namespace qmaps
