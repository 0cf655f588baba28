#include "qmaps/noise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qmaps {

namespace {
constexpr double pi = 3.14159265358979323846264338327950288;
constexpr double two_pi = 2.0 * pi;
}  // namespace

ErrorDraw draw_errors(const NoiseConfig& cfg, std::uint64_t realization,
                      std::uint64_t gate_seq_index) {
    RngStream s(cfg.master_seed, realization, gate_seq_index);
    ErrorDraw d;
    d.xi = cfg.epsilon * (s.next_uniform() - 0.5);
    d.gamma = two_pi * s.next_uniform();
    return d;
}

double draw_uniform(const NoiseConfig& cfg, std::uint64_t realization,
                    std::uint64_t gate_seq_index) {
    RngStream s(cfg.master_seed, realization, gate_seq_index);
    return s.next_uniform();
}

std::vector<NoisyOp> perturb(const Gate& g, const ErrorDraw& d) {
    std::vector<NoisyOp> ops;
    switch (g.kind) {
        case GateKind::Phase:
            ops.push_back(g);
            ops.push_back(Gate::phase(g.q0, d.xi));
            break;
        case GateKind::ControlledPhase:
            ops.push_back(g);
            ops.push_back(Gate::controlled_phase(g.q0, g.q1, d.xi));
            break;
        case GateKind::Hadamard: {
            ops.push_back(g);
            constexpr double inv_sqrt2 = 0.70710678118654752440;
            const double cg = std::cos(d.gamma), sg = std::sin(d.gamma);
            BlochAxis mu{sg * inv_sqrt2, cg, -sg * inv_sqrt2};
            ops.push_back(MatrixOp{g.q0, bloch_matrix(mu, d.xi)});
            break;
        }
        case GateKind::MeasureReset:
            ops.push_back(g);
            break;
    }
    return ops;
}

ErrorSpectrum error_spectrum(GateKind kind, double xi) {
    switch (kind) {
        case GateKind::Hadamard:
        case GateKind::Phase:
            return {0.5 * xi, -0.5 * xi};
        case GateKind::ControlledPhase:
            return {0.0, 0.0, 0.0, xi};
        default:
            throw std::invalid_argument("error_spectrum: MeasureReset carries no error");
    }
}

double sigma_lambda_sq(const ErrorSpectrum& spectrum) {
    if (spectrum.empty())
        throw std::invalid_argument("sigma_lambda_sq: empty spectrum");
    double mean = 0.0;
    for (double l : spectrum) mean += l;
    mean /= static_cast<double>(spectrum.size());
    double var = 0.0;
    for (double l : spectrum) var += (l - mean) * (l - mean);
    return var / static_cast<double>(spectrum.size());
}

double varsigma(const ErrorSpectrum& spectrum) {
    if (spectrum.empty())
        throw std::invalid_argument("varsigma: empty spectrum");
    // Phases on the unit circle; find the smallest containing arc as the
    // complement of the largest gap between consecutive phases.
    std::vector<double> ph(spectrum);
    for (double& p : ph) {
        p = std::fmod(p, two_pi);
        if (p < 0) p += two_pi;
    }
    std::sort(ph.begin(), ph.end());
    const std::size_t n = ph.size();
    double max_gap = two_pi - ph.back() + ph.front();
    for (std::size_t i = 1; i < n; ++i)
        max_gap = std::max(max_gap, ph[i] - ph[i - 1]);
    const double arc = two_pi - max_gap;
    if (arc > pi)
        throw std::domain_error(
            "varsigma: eigenphases are not contained in a half circle");
    const double r = 0.5 * arc;
    return 2.0 * std::sin(0.5 * r);
}

std::vector<Gate> quantize_phases(const std::vector<Gate>& gates, double delta) {
    if (!(delta > 0.0))
        throw std::invalid_argument("quantize_phases: delta must be positive");
    std::vector<Gate> out;
    out.reserve(gates.size());
    for (const Gate& g : gates) {
        switch (g.kind) {
            case GateKind::Phase:
                out.push_back(Gate::phase(g.q0, delta * std::round(g.phi / delta)));
                break;
            case GateKind::ControlledPhase:
                out.push_back(Gate::controlled_phase(
                    g.q0, g.q1, delta * std::round(g.phi / delta)));
                break;
            default:
                out.push_back(g);
        }
    }
    return out;
}

}  // namespace qmaps
