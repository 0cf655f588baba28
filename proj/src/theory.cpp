#include "qmaps/theory.hpp"

#include <cmath>
#include <stdexcept>

namespace qmaps::theory {

double sigma_star_sq(double n1_frac, double n2_frac, double epsilon) {
    if (n1_frac < 0.0 || n2_frac < 0.0 || std::abs(n1_frac + n2_frac - 1.0) > 1e-9)
        throw std::invalid_argument("sigma_star_sq: gate fractions must be a partition of 1");
    return (n1_frac * kOneQubitCoeff + n2_frac * kTwoQubitCoeff) * epsilon * epsilon / 12.0;
}

double hilbert_factor(int n_q) {
    if (n_q < 0)
        throw std::invalid_argument("hilbert_factor: negative qubit count");
    const double N = std::ldexp(1.0, n_q);
    return N / (1.0 + N);
}

double mean_fidelity(std::size_t n_g_total, double sigma_star_sq, int n_q) {
    return 1.0 - hilbert_factor(n_q) * static_cast<double>(n_g_total) * sigma_star_sq;
}

bool mean_fidelity_in_regime(std::size_t n_g_total, double sigma_star_sq, int n_q) {
    return hilbert_factor(n_q) * static_cast<double>(n_g_total) * sigma_star_sq <= 0.5;
}

double fidelity_std_ratio(int n_q) {
    if (n_q < 0)
        throw std::invalid_argument("fidelity_std_ratio: negative qubit count");
    return 1.0 / std::sqrt(std::ldexp(1.0, n_q));
}

double fidelity_bound(std::size_t n_g_total, double epsilon) {
    const double ng = static_cast<double>(n_g_total);
    const double b = ng * ng * epsilon * epsilon / 64.0;
    return b < 1.0 ? b : 1.0;
}

TheoryPrediction predict(const CompiledCircuit& circuit, double epsilon, int n_q) {
    const auto n_g = static_cast<double>(circuit.n_g());
    if (n_g == 0.0)
        throw std::invalid_argument("predict: circuit has no unitary gates");
    TheoryPrediction t;
    t.n1_frac = static_cast<double>(circuit.n1) / n_g;
    t.n2_frac = static_cast<double>(circuit.n2) / n_g;
    t.sigma_star_sq = sigma_star_sq(t.n1_frac, t.n2_frac, epsilon);
    t.A = hilbert_factor(n_q);
    t.gamma_th = t.A * n_g * t.sigma_star_sq;
    t.varsigma_star = epsilon / 8.0;
    t.bound_coeff = epsilon * epsilon / 64.0;
    return t;
}

}  // namespace qmaps::theory
