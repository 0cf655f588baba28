#pragma once

#include <cstddef>

#include "qmaps/mapcircuits.hpp"

namespace qmaps {

// Closed-form fidelity-decay predictions for the unbiased error model.
//
// Per-gate eigenphase variances: a one-qubit error contributes xi^2/4, a
// two-qubit error 3 xi^2/16; averaging xi^2 over its uniform [-eps/2, eps/2]
// law gives <xi^2> = eps^2/12, so a circuit with one/two-qubit gate fractions
// (w1, w2) has
//   sigma_star^2 = (w1/4 + 3 w2/16) eps^2 / 12,
// bracketed by eps^2/64 (all two-qubit) and eps^2/48 (all one-qubit).
// The ensemble-mean fidelity after N_g noisy gates decays as
//   <f> = 1 - A N_g sigma_star^2,  A = N / (1 + N),
// and no single realization can beat the worst-case unitary bound
//   1 - f <= N_g^2 eps^2 / 64
// (per-gate distance to the closest global phase is at most
//  varsigma_star = eps/8 on average).
namespace theory {

inline constexpr double kOneQubitCoeff = 0.25;      // eigenphase variance / xi^2
inline constexpr double kTwoQubitCoeff = 3.0 / 16.0;

// (w1/4 + 3 w2/16) eps^2 / 12 for gate fractions w1 + w2 = 1.
double sigma_star_sq(double n1_frac, double n2_frac, double epsilon);

// A = N / (1 + N) for N = 2^n_q.
double hilbert_factor(int n_q);

// 1 - A N_g sigma_star^2 (the perturbative mean; meaningful while the decay
// stays small).
double mean_fidelity(std::size_t n_g_total, double sigma_star_sq, int n_q);
bool mean_fidelity_in_regime(std::size_t n_g_total, double sigma_star_sq, int n_q);

// Predicted sigma(f) / (1 - <f>) = N^{-1/2} (ensembles measure an exponent
// closer to 1/3; both are reported by the harness, see fluctuation fits).
double fidelity_std_ratio(int n_q);

// min(1, N_g^2 eps^2 / 64): worst-case fidelity loss for purely unitary
// noisy circuits.
double fidelity_bound(std::size_t n_g_total, double epsilon);

// Everything the harness needs for one circuit at one noise level.
struct TheoryPrediction {
    double sigma_star_sq = 0.0;
    double A = 0.0;
    double gamma_th = 0.0;        // per map step: A n_g sigma_star^2
    double varsigma_star = 0.0;   // eps/8
    double bound_coeff = 0.0;     // eps^2/64 (per N_g^2)
    double n1_frac = 0.0;
    double n2_frac = 0.0;
};

// Uses the circuit's measured per-step gate census.
TheoryPrediction predict(const CompiledCircuit& circuit, double epsilon, int n_q);

}  // namespace theory
}  // namespace qmaps
