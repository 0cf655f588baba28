#include "doctest.h"

#include <cmath>
#include <complex>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qmaps/mapcircuits.hpp"
#include "qmaps/oracle.hpp"
#include "qmaps/rng.hpp"

using namespace qmaps;

namespace {

std::uint64_t binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i)
        r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    return r;
}

// Dense diagonal realized by a list of ideal multi-controlled phases.
oracle::CMat mcp_list_unitary(const std::vector<MultiControlledPhase>& mcps, int n_q) {
    const std::size_t N = std::size_t{1} << n_q;
    std::vector<double> phase(N, 0.0);
    for (const MultiControlledPhase& mc : mcps) {
        std::size_t mask = 0;
        for (int w : mc.wires) mask |= std::size_t{1} << w;
        for (std::size_t x = 0; x < N; ++x)
            if ((x & mask) == mask) phase[x] += mc.phi;
    }
    std::vector<cx> d(N);
    for (std::size_t x = 0; x < N; ++x) d[x] = std::polar(1.0, phase[x]);
    return oracle::CMat::diagonal(d);
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) lines.push_back(line);
    return lines;
}

}  // namespace

TEST_CASE("kick potential coefficients around the grid offset") {
    MapConfig cfg;
    cfg.n_q = 4;
    cfg.has_delta_theta = true;
    cfg.delta_theta_value = -2.0;

    SUBCASE("sawtooth: -y^2/2 shifted") {
        cfg.map = MapKind::Sawtooth;
        const PolynomialPotential pot = potential_coefficients(cfg);
        CHECK(pot.p == 2);
        CHECK(pot.f[1] == 2.0);   // -delta
        CHECK(pot.f[2] == -0.5);
    }
    SUBCASE("double well: (y^2 - a^2)^2 shifted") {
        cfg.map = MapKind::DoubleWell;
        cfg.a = 1.5;
        const PolynomialPotential pot = potential_coefficients(cfg);
        CHECK(pot.p == 4);
        CHECK(pot.f[4] == 1.0);
        CHECK(pot.f[3] == doctest::Approx(-8.0));            // 4 delta
        CHECK(pot.f[2] == doctest::Approx(24.0 - 4.5));      // 6 d^2 - 2 a^2
        CHECK(pot.f[1] == doctest::Approx(-8.0 * (4.0 - 2.25)));  // 4 d (d^2 - a^2)
    }
    SUBCASE("both expansions reproduce the defining polynomial on a grid") {
        cfg.map = MapKind::DoubleWell;
        cfg.a = 1.6;
        cfg.has_delta_theta = false;  // default offset
        const double d = cfg.delta_theta();
        CHECK(d == 0.5 * (1.0 - 16.0));
        const PolynomialPotential pot = potential_coefficients(cfg);
        RngStream rng(5, 6);
        for (int i = 0; i < 100; ++i) {
            const double j = 20.0 * (rng.next_uniform() - 0.5);
            const double y = j + d;
            const double direct = std::pow(y * y - cfg.a * cfg.a, 2);
            double expanded = std::pow(d * d - cfg.a * cfg.a, 2);  // constant term
            double jp = 1.0;
            for (int m = 1; m <= pot.p; ++m) {
                jp *= j;
                expanded += pot.f[static_cast<std::size_t>(m)] * jp;
            }
            CHECK(direct == doctest::Approx(expanded).epsilon(1e-9));
        }
    }
}

TEST_CASE("partitions enumerates descending multisets") {
    CHECK(partitions(4, 2) == std::vector<std::vector<int>>{{3, 1}, {2, 2}});
    CHECK(partitions(3, 3) == std::vector<std::vector<int>>{{1, 1, 1}});
    CHECK(partitions(5, 1) == std::vector<std::vector<int>>{{5}});
    CHECK(partitions(3, 4).empty());
    CHECK(partitions(0, 1).empty());
    // Partition numbers p(n into k parts): p(7 into 3) = 4.
    CHECK(partitions(7, 3).size() == 4);
}

TEST_CASE("collected phases: closed small cases in exact arithmetic") {
    const FixedPointPhase beta = FixedPointPhase::from_dyadic(1, 20);

    // p = 2, J = {j}: beta . 2^{2j}.
    CHECK(collected_phase({1}, 2, beta).raw() == beta.shifted(2).raw());
    CHECK(collected_phase({3}, 2, beta).raw() == beta.shifted(6).raw());

    // p = 2, J = {j, k}: 2 beta . 2^{j+k}.
    CHECK(collected_phase({0, 1}, 2, beta).raw() == beta.times(2).shifted(1).raw());
    CHECK(collected_phase({1, 3}, 2, beta).raw() == beta.times(2).shifted(4).raw());

    // p = 3, J = {0, 1}: 3 beta (2^2 + 2^1) from count vectors (1,2) and (2,1).
    FixedPointPhase want = beta.times(3).shifted(2);
    want += beta.times(3).shifted(1);
    CHECK(collected_phase({0, 1}, 3, beta).raw() == want.raw());

    // p = 1 touches single wires only.
    CHECK(collected_phase({2}, 1, beta).raw() == beta.shifted(2).raw());

    CHECK_THROWS_AS(collected_phase({}, 2, beta), std::invalid_argument);
    CHECK_THROWS_AS(collected_phase({0, 1, 2}, 2, beta), std::invalid_argument);
    CHECK_THROWS_AS(collected_phase({1, 1}, 2, beta), std::invalid_argument);
    CHECK_THROWS_AS(collected_phase({2, 1}, 3, beta), std::invalid_argument);
    CHECK_THROWS_AS(collected_phase({0}, 0, beta), std::invalid_argument);
}

TEST_CASE("collected circuits realize diag(exp(2 pi i beta x^p)) exactly") {
    RngStream rng(77, 3);
    for (int n_q = 1; n_q <= 3; ++n_q) {
        for (int p = 1; p <= 4; ++p) {
            for (int trial = 0; trial < 3; ++trial) {
                const FixedPointPhase beta =
                    FixedPointPhase::from_double(rng.next_uniform() - 0.5);
                const auto mcps = exponentiation_circuit(beta, p, n_q);
                CHECK(mcps.size() == collected_gate_count(n_q, p));
                const std::size_t N = std::size_t{1} << n_q;
                std::vector<cx> want(N);
                for (std::size_t x = 0; x < N; ++x) {
                    std::uint64_t xp = 1;
                    for (int i = 0; i < p; ++i) xp *= x;
                    want[x] = std::polar(1.0, beta.times(xp).to_radians());
                }
                const double dev = oracle::max_deviation(
                    mcp_list_unitary(mcps, n_q), oracle::CMat::diagonal(want));
                CHECK(dev < 1e-10);
            }
        }
    }
}

TEST_CASE("collected gate counts: binomial sums, far below the per-tuple count") {
    CHECK(collected_gate_count(5, 4) == 30);   // vs 5^4 = 625 per-tuple gates
    CHECK(collected_gate_count(10, 2) == 55);
    CHECK(collected_gate_count(3, 4) == 7);    // all nonempty subsets
    CHECK(collected_gate_count(1, 1) == 1);
    for (int n_q = 1; n_q <= 8; ++n_q) {
        std::uint64_t want = 0;
        for (int k = 1; k <= std::min(n_q, 3); ++k) want += binom(n_q, k);
        CHECK(collected_gate_count(n_q, 3) == want);
    }
    CHECK_THROWS_AS(collected_gate_count(0, 2), std::invalid_argument);
}

TEST_CASE("Fourier circuit times bit reversal is the DFT matrix") {
    for (int n_q = 1; n_q <= 5; ++n_q) {
        const QftCircuit qc = qft_circuit(n_q);
        CHECK(qc.bit_reversed);
        const GateCounts c = count_gates(qc.gates);
        CHECK(c.n1 == static_cast<std::size_t>(n_q));
        CHECK(c.n2 == static_cast<std::size_t>(n_q * (n_q - 1) / 2));
        const oracle::CMat u = oracle::circuit_unitary(qc.gates, n_q);
        const double dev = oracle::max_deviation(
            u.mul(oracle::bit_reversal_matrix(n_q)),
            oracle::dft_matrix(std::size_t{1} << n_q));
        CHECK(dev < 1e-12);
    }
    CHECK_THROWS_AS(qft_circuit(0), std::invalid_argument);
}

TEST_CASE("map step gate census") {
    SUBCASE("sawtooth: 4 n_q one-qubit and 4 C(n_q,2) two-qubit gates") {
        for (int n_q : {2, 5, 10}) {
            MapConfig cfg;
            cfg.map = MapKind::Sawtooth;
            cfg.n_q = n_q;
            const CompiledCircuit c = map_step_circuit(cfg, Decomposition::AncillaEager);
            CHECK(c.n1 == static_cast<std::size_t>(4 * n_q));
            CHECK(c.n2 == static_cast<std::size_t>(4) * binom(n_q, 2));
            CHECK_FALSE(c.uses_ancilla);
            CHECK_FALSE(c.has_measurement());
            CHECK(c.total_wires() == n_q);
            CHECK(c.step_boundaries == std::vector<std::size_t>{c.gates.size()});
        }
        // The documented headline census.
        MapConfig cfg;
        cfg.map = MapKind::Sawtooth;
        cfg.n_q = 10;
        const CompiledCircuit c = map_step_circuit(cfg, Decomposition::AncillaEager);
        CHECK(c.n1 == 40);
        CHECK(c.n2 == 180);
        CHECK(c.n_g() == 220);
    }
    SUBCASE("double well at n_q = 3 never allocates the ancilla") {
        MapConfig cfg;
        cfg.map = MapKind::DoubleWell;
        cfg.n_q = 3;
        for (Decomposition s : {Decomposition::AncillaEager, Decomposition::AncillaMin}) {
            const CompiledCircuit c = map_step_circuit(cfg, s);
            CHECK_FALSE(c.uses_ancilla);
            CHECK_FALSE(c.has_measurement());
            CHECK(c.n1 == 16);
            CHECK(c.n2 == 17);
        }
    }
    SUBCASE("double well at n_q = 4: ancilla wire, strategy changes the census") {
        MapConfig cfg;
        cfg.map = MapKind::DoubleWell;
        cfg.n_q = 4;
        const CompiledCircuit eager = map_step_circuit(cfg, Decomposition::AncillaEager);
        CHECK(eager.uses_ancilla);
        CHECK(eager.total_wires() == 5);
        CHECK(eager.has_measurement());
        CHECK(eager.n1 == 80);
        CHECK(eager.n2 == 83);
        const CompiledCircuit lazy = map_step_circuit(cfg, Decomposition::AncillaMin);
        CHECK(lazy.uses_ancilla);
        CHECK(lazy.n1 == 48);
        CHECK(lazy.n2 == 59);
        // Eager trades more gates for more measurements.
        std::size_t eager_mr = 0, lazy_mr = 0;
        for (const Gate& g : eager.gates)
            if (g.kind == GateKind::MeasureReset) ++eager_mr;
        for (const Gate& g : lazy.gates)
            if (g.kind == GateKind::MeasureReset) ++lazy_mr;
        CHECK(eager_mr == 5);
        CHECK(lazy_mr == 1);
    }
}

TEST_CASE("compiled map step equals the dense one-period operator") {
    for (MapKind map : {MapKind::Sawtooth, MapKind::DoubleWell}) {
        for (int n_q : {2, 3}) {
            MapConfig cfg;
            cfg.map = map;
            cfg.n_q = n_q;
            const oracle::CMat want = oracle::floquet_operator(cfg);
            for (Decomposition s :
                 {Decomposition::AncillaEager, Decomposition::AncillaMin}) {
                const CompiledCircuit circuit = map_step_circuit(cfg, s);
                std::vector<Gate> unitary;
                for (const Gate& g : circuit.gates)
                    if (g.kind != GateKind::MeasureReset) unitary.push_back(g);
                oracle::CMat got = oracle::circuit_unitary(unitary, circuit.total_wires());
                double leak = 0.0;
                if (circuit.uses_ancilla)
                    got = oracle::restrict_to_ancilla_zero(got, circuit.n_system, &leak);
                CHECK(leak < 1e-9);
                CHECK(oracle::max_deviation_up_to_phase(got, want) < 1e-9);
            }
        }
    }
}

TEST_CASE("a kickless map is the bare free rotation") {
    MapConfig cfg;
    cfg.map = MapKind::Sawtooth;
    cfg.n_q = 3;
    cfg.K = 0.0;
    const CompiledCircuit circuit = map_step_circuit(cfg, Decomposition::AncillaEager);
    const oracle::CMat got = oracle::circuit_unitary(circuit.gates, 3);
    CHECK(oracle::max_deviation_up_to_phase(got, oracle::floquet_operator(cfg)) < 1e-9);
    // Coordinate gates carry no phase at K = 0: the kick diagonal is trivial.
    const oracle::CMat F = oracle::dft_matrix(8);
    std::vector<cx> rot(8);
    for (std::size_t j = 0; j < 8; ++j)
        rot[j] = std::polar(1.0, -3.14159265358979323846 * 2.0 *
                                     static_cast<double>(j * j) / 8.0);
    const oracle::CMat want = F.mul(oracle::CMat::diagonal(rot)).mul(F.adjoint());
    CHECK(oracle::max_deviation_up_to_phase(got, want) < 1e-9);
}

TEST_CASE("map configuration validation") {
    MapConfig cfg;
    cfg.n_q = 0;
    CHECK_THROWS_AS(map_step_circuit(cfg, Decomposition::AncillaEager),
                    std::invalid_argument);
    cfg.n_q = 4;
    cfg.L = 0;
    CHECK_THROWS_AS(map_step_circuit(cfg, Decomposition::AncillaEager),
                    std::invalid_argument);
    cfg.L = 2;
    cfg.K = std::nan("");
    CHECK_THROWS_AS(map_step_circuit(cfg, Decomposition::AncillaEager),
                    std::invalid_argument);
    cfg.K = 0.04;
    cfg.map = MapKind::DoubleWell;
    cfg.a = -1.0;
    CHECK_THROWS_AS(map_step_circuit(cfg, Decomposition::AncillaEager),
                    std::invalid_argument);
}

TEST_CASE("initial state: Hadamards everywhere except the second-highest wire") {
    MapConfig cfg;
    cfg.map = MapKind::Sawtooth;
    cfg.n_q = 3;
    const CompiledCircuit circuit = map_step_circuit(cfg, Decomposition::AncillaEager);
    const StateVector psi = initial_state(circuit);
    CHECK(psi.n_qubits() == 3);
    // Wires 0 and 2 in superposition, wire 1 clean: labels 0, 1, 4, 5.
    for (std::size_t label : {0u, 1u, 4u, 5u})
        CHECK(std::abs(psi.amplitudes()[label] - cx(0.5, 0.0)) < 1e-15);
    for (std::size_t label : {2u, 3u, 6u, 7u})
        CHECK(std::abs(psi.amplitudes()[label]) < 1e-15);
}

TEST_CASE("initial state keeps an allocated ancilla clean") {
    MapConfig cfg;
    cfg.map = MapKind::DoubleWell;
    cfg.n_q = 4;
    const CompiledCircuit circuit = map_step_circuit(cfg, Decomposition::AncillaEager);
    const StateVector psi = initial_state(circuit);
    CHECK(psi.n_qubits() == 5);
    double p_anc1 = 0.0;
    for (std::size_t x = 16; x < 32; ++x) p_anc1 += std::norm(psi.amplitudes()[x]);
    CHECK(p_anc1 == 0.0);
}

TEST_CASE("circuit dump structure") {
    MapConfig cfg;
    cfg.map = MapKind::Sawtooth;
    cfg.n_q = 2;
    const CompiledCircuit circuit = map_step_circuit(cfg, Decomposition::AncillaEager);
    const std::string text = dump_circuit_string(circuit, cfg, Decomposition::AncillaEager);
    const std::vector<std::string> lines = split_lines(text);
    REQUIRE(lines.size() == 14);  // 2 header lines + 12 gates
    CHECK(lines[0] ==
          "# map=sawtooth n_q=2 L=2 K=0.04 delta_theta=-1.5 "
          "decomposition=ancilla-eager ancilla=none");
    CHECK(lines[1] == "# n_1=8 n_2=4 n_g=12 steps=1");
    // Kick, inverse Fourier half, mirrored momentum diagonal, Fourier half.
    const std::vector<std::string> kinds = {"R", "CR", "R", "H", "CR", "H",
                                            "R", "CR", "R", "H", "CR", "H"};
    for (std::size_t i = 0; i < kinds.size(); ++i) {
        std::istringstream ss(lines[i + 2]);
        std::string kind, wires, hex;
        ss >> kind >> wires >> hex;
        CHECK(kind == kinds[i]);
        if (kind == "CR") CHECK(wires == "0,1");
        if (kind == "R" || kind == "CR") {
            CHECK(hex.size() == 32);
        } else {
            CHECK(hex.empty());
        }
    }
}

TEST_CASE("compilation is deterministic") {
    MapConfig cfg;
    cfg.map = MapKind::DoubleWell;
    cfg.n_q = 5;
    const CompiledCircuit a = map_step_circuit(cfg, Decomposition::AncillaEager);
    const CompiledCircuit b = map_step_circuit(cfg, Decomposition::AncillaEager);
    REQUIRE(a.gates.size() == b.gates.size());
    for (std::size_t i = 0; i < a.gates.size(); ++i) {
        CHECK(a.gates[i].kind == b.gates[i].kind);
        CHECK(a.gates[i].q0 == b.gates[i].q0);
        CHECK(a.gates[i].q1 == b.gates[i].q1);
        CHECK(a.gates[i].phi == b.gates[i].phi);
    }
}
