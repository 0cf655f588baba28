#include "qmaps/mapcircuits.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qmaps {

namespace {
constexpr double pi = 3.14159265358979323846264338327950288;
constexpr double two_pi = 2.0 * pi;

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    }
    return r;
}

std::uint64_t factorial(int n) {
    std::uint64_t r = 1;
    for (int i = 2; i <= n; ++i) r *= static_cast<std::uint64_t>(i);
    return r;
}

void check_wire_set(const std::vector<int>& J, int p) {
    if (J.empty())
        throw std::invalid_argument("collected_phase: empty wire set");
    if (static_cast<int>(J.size()) > p)
        throw std::invalid_argument("collected_phase: |J| exceeds the exponent");
    for (std::size_t i = 1; i < J.size(); ++i)
        if (J[i] <= J[i - 1])
            throw std::invalid_argument("collected_phase: wires must be sorted and distinct");
    if (J.front() < 0)
        throw std::invalid_argument("collected_phase: negative wire index");
}

// Visits nonempty subsets of {0..n_q-1} with at most max_size elements in
// lexicographic order of the sorted index tuples.
template <typename Visit>
void for_each_subset(int n_q, int max_size, Visit&& visit) {
    std::vector<int> J;
    auto rec = [&](auto&& self, int start) -> void {
        for (int w = start; w < n_q; ++w) {
            J.push_back(w);
            visit(J);
            if (static_cast<int>(J.size()) < max_size) self(self, w + 1);
            J.pop_back();
        }
    };
    rec(rec, 0);
}

}  // namespace

double MapConfig::delta_theta() const {
    if (has_delta_theta) return delta_theta_value;
    return 0.5 * (1.0 - static_cast<double>(N()));
}

PolynomialPotential potential_coefficients(const MapConfig& cfg) {
    const double d = cfg.delta_theta();
    PolynomialPotential pot;
    switch (cfg.map) {
        case MapKind::Sawtooth:
            pot.p = 2;
            pot.f = {0.0, -d, -0.5};
            break;
        case MapKind::DoubleWell: {
            const double a2 = cfg.a * cfg.a;
            pot.p = 4;
            pot.f = {0.0, 4.0 * d * (d * d - a2), 6.0 * d * d - 2.0 * a2, 4.0 * d, 1.0};
            break;
        }
    }
    return pot;
}

std::vector<std::vector<int>> partitions(int n, int k) {
    if (n < 1 || k < 1 || k > n)
        return {};
    std::vector<std::vector<int>> out;
    std::vector<int> parts;
    // Descending parts: each part at most the previous one, at least 1.
    auto rec = [&](auto&& self, int remaining, int slots, int max_part) -> void {
        if (slots == 1) {
            if (remaining <= max_part) {
                parts.push_back(remaining);
                out.push_back(parts);
                parts.pop_back();
            }
            return;
        }
        // Leave at least slots-1 for the rest; keep parts non-increasing.
        for (int v = std::min(max_part, remaining - (slots - 1)); v >= 1; --v) {
            if (v * slots < remaining) break;  // cannot fill the rest with <= v
            parts.push_back(v);
            self(self, remaining - v, slots - 1, v);
            parts.pop_back();
        }
    };
    rec(rec, n, k, n);
    return out;
}

FixedPointPhase collected_phase(const std::vector<int>& J, int p,
                                const FixedPointPhase& beta) {
    if (p < 1)
        throw std::invalid_argument("collected_phase: exponent must be >= 1");
    if (p > 20)
        throw std::invalid_argument("collected_phase: exponent too large");
    check_wire_set(J, p);
    const int k = static_cast<int>(J.size());
    const std::uint64_t p_fact = factorial(p);

    // Sum over count vectors (c_1..c_k), c_i >= 1, sum c_i = p: each distinct
    // assignment of a multiset partition onto the labeled wires of J appears
    // exactly once.
    FixedPointPhase total;
    auto rec = [&](auto&& self, int i, int remaining, std::uint64_t fact_prod,
                   unsigned shift) -> void {
        if (i == k - 1) {
            const int ci = remaining;
            const std::uint64_t coeff = p_fact / (fact_prod * factorial(ci));
            const unsigned s = shift + static_cast<unsigned>(ci * J[static_cast<std::size_t>(i)]);
            total += beta.times(coeff).shifted(s);
            return;
        }
        for (int ci = 1; ci <= remaining - (k - 1 - i); ++ci) {
            self(self, i + 1, remaining - ci, fact_prod * factorial(ci),
                 shift + static_cast<unsigned>(ci * J[static_cast<std::size_t>(i)]));
        }
    };
    rec(rec, 0, p, 1, 0);
    return total;
}

std::uint64_t collected_gate_count(int n_q, int p) {
    if (n_q < 1 || p < 1)
        throw std::invalid_argument("collected_gate_count: n_q and p must be >= 1");
    std::uint64_t total = 0;
    for (int k = 1; k <= std::min(n_q, p); ++k) total += binomial(n_q, k);
    return total;
}

std::vector<MultiControlledPhase> exponentiation_circuit(const FixedPointPhase& beta,
                                                         int p, int n_q) {
    if (n_q < 1)
        throw std::invalid_argument("exponentiation_circuit: n_q must be >= 1");
    if (p < 1)
        throw std::invalid_argument("exponentiation_circuit: exponent must be >= 1");
    std::vector<MultiControlledPhase> out;
    for_each_subset(n_q, std::min(n_q, p), [&](const std::vector<int>& J) {
        out.push_back(MultiControlledPhase{J, collected_phase(J, p, beta).to_radians()});
    });
    return out;
}

QftCircuit qft_circuit(int n_q) {
    if (n_q < 1)
        throw std::invalid_argument("qft_circuit: n_q must be >= 1");
    QftCircuit qc;
    for (int q = 0; q < n_q; ++q) {
        qc.gates.push_back(Gate::hadamard(q));
        for (int c = q + 1; c < n_q; ++c) {
            qc.gates.push_back(
                Gate::controlled_phase(c, q, two_pi / std::ldexp(1.0, c - q + 1)));
        }
    }
    return qc;
}

bool CompiledCircuit::has_measurement() const {
    return std::any_of(gates.begin(), gates.end(), [](const Gate& g) {
        return g.kind == GateKind::MeasureReset;
    });
}

CompiledCircuit map_step_circuit(const MapConfig& cfg, Decomposition strategy) {
    if (cfg.n_q < 1 || cfg.n_q > 40)
        throw std::invalid_argument("map_step_circuit: n_q out of range");
    if (cfg.L < 1)
        throw std::invalid_argument("map_step_circuit: L must be a positive integer");
    if (!std::isfinite(cfg.K))
        throw std::invalid_argument("map_step_circuit: K must be finite");
    if (cfg.map == MapKind::DoubleWell && !(cfg.a > 0.0))
        throw std::invalid_argument("map_step_circuit: a must be positive");

    const int n_q = cfg.n_q;
    const PolynomialPotential pot = potential_coefficients(cfg);
    const int p = pot.p;

    CompiledCircuit circ;
    circ.n_system = n_q;
    circ.uses_ancilla = (cfg.map == MapKind::DoubleWell && n_q >= 4);
    const std::optional<int> ancilla =
        circ.uses_ancilla ? std::optional<int>(n_q) : std::nullopt;

    // beta_m = -K f_m (2 pi)^{p-2} / (L N^{p-1})
    const double scale = -cfg.K * std::pow(two_pi, p - 2) /
                         (static_cast<double>(cfg.L) * std::ldexp(1.0, n_q * (p - 1)));
    std::vector<FixedPointPhase> beta(static_cast<std::size_t>(p) + 1);
    for (int m = 1; m <= p; ++m)
        beta[static_cast<std::size_t>(m)] =
            FixedPointPhase::from_double(pot.f[static_cast<std::size_t>(m)] * scale);

    auto emit_mcp = [&](const MultiControlledPhase& mcp) {
        std::vector<Gate> gs = compile_multi_controlled(mcp, strategy, ancilla);
        circ.gates.insert(circ.gates.end(), gs.begin(), gs.end());
    };

    // Coordinate kick: one collected gate per wire set, phase accumulated
    // over every monomial degree that can reach the set.
    for_each_subset(n_q, std::min(n_q, p), [&](const std::vector<int>& J) {
        FixedPointPhase phase;
        for (int m = static_cast<int>(J.size()); m <= p; ++m)
            phase += collected_phase(J, m, beta[static_cast<std::size_t>(m)]);
        emit_mcp(MultiControlledPhase{J, phase.to_radians()});
    });

    // Into the momentum basis.
    const QftCircuit qft = qft_circuit(n_q);
    for (auto it = qft.gates.rbegin(); it != qft.gates.rend(); ++it) {
        Gate g = *it;
        if (g.kind == GateKind::ControlledPhase)
            g = Gate::controlled_phase(g.q0, g.q1, -g.phi);
        circ.gates.push_back(g);
    }

    // Free rotation, diagonal in momentum; wire sets mirrored because the
    // Fourier halves carry the bit-reversal.
    const FixedPointPhase beta_eta = FixedPointPhase::from_dyadic(-cfg.L, n_q + 1);
    for (MultiControlledPhase mcp : exponentiation_circuit(beta_eta, 2, n_q)) {
        for (int& w : mcp.wires) w = n_q - 1 - w;
        std::sort(mcp.wires.begin(), mcp.wires.end());
        emit_mcp(mcp);
    }

    // Back to the coordinate basis.
    circ.gates.insert(circ.gates.end(), qft.gates.begin(), qft.gates.end());

    const GateCounts counts = count_gates(circ.gates);
    circ.n1 = counts.n1;
    circ.n2 = counts.n2;
    circ.step_boundaries = {circ.gates.size()};
    return circ;
}

StateVector initial_state(const CompiledCircuit& circuit) {
    StateVector psi = StateVector::basis_state(circuit.total_wires(), 0);
    for (int w = 0; w < circuit.n_system; ++w) {
        if (w == circuit.n_system - 2) continue;
        psi.apply_hadamard(w);
    }
    return psi;
}

void dump_circuit(std::ostream& os, const CompiledCircuit& circuit,
                  const MapConfig& cfg, Decomposition strategy) {
    os << "# map=" << map_name(cfg.map) << " n_q=" << cfg.n_q << " L=" << cfg.L
       << " K=" << cfg.K;
    if (cfg.map == MapKind::DoubleWell) os << " a=" << cfg.a;
    os << " delta_theta=" << cfg.delta_theta()
       << " decomposition=" << decomposition_name(strategy) << " ancilla=";
    if (circuit.uses_ancilla)
        os << circuit.n_system;
    else
        os << "none";
    os << "\n";
    os << "# n_1=" << circuit.n1 << " n_2=" << circuit.n2 << " n_g=" << circuit.n_g()
       << " steps=" << circuit.step_boundaries.size() << "\n";
    for (const Gate& g : circuit.gates) {
        os << kind_name(g.kind) << ' ' << g.q0;
        if (g.kind == GateKind::ControlledPhase) os << ',' << g.q1;
        if (g.kind == GateKind::Phase || g.kind == GateKind::ControlledPhase) {
            os << ' '
               << FixedPointPhase::from_double(g.phi / two_pi).to_hex();
        }
        os << "\n";
    }
}

std::string dump_circuit_string(const CompiledCircuit& circuit, const MapConfig& cfg,
                                Decomposition strategy) {
    std::ostringstream ss;
    dump_circuit(ss, circuit, cfg, strategy);
    return ss.str();
}

const char* map_name(MapKind m) {
    switch (m) {
        case MapKind::Sawtooth: return "sawtooth";
        case MapKind::DoubleWell: return "double-well";
    }
    return "?";
}

const char* decomposition_name(Decomposition d) {
    switch (d) {
        case Decomposition::AncillaEager: return "ancilla-eager";
        case Decomposition::AncillaMin: return "ancilla-min";
    }
    return "?";
}

}  // namespace qmaps
