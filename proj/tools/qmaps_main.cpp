// Command-line front end: compiles the map circuits, runs the Monte Carlo
// harness, and prints theory numbers, Haar-moment tables, and dense oracle
// cross-checks.  All machine-readable output is CSV; everything else is
// plain text on stdout.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qmaps/haar.hpp"
#include "qmaps/harness.hpp"
#include "qmaps/mapcircuits.hpp"
#include "qmaps/noise.hpp"
#include "qmaps/oracle.hpp"
#include "qmaps/rng.hpp"
#include "qmaps/theory.hpp"

namespace {

using namespace qmaps;

struct MapOpts {
    std::string map = "sawtooth";
    int L = 2;
    double K = 0.04;
    double a = 1.6;
    std::optional<double> delta_theta;
    std::string decomposition = "ancilla-eager";
};

MapKind parse_map(const std::string& s) {
    return s == "double-well" ? MapKind::DoubleWell : MapKind::Sawtooth;
}

Decomposition parse_decomposition(const std::string& s) {
    return s == "ancilla-min" ? Decomposition::AncillaMin : Decomposition::AncillaEager;
}

MapConfig make_map_config(const MapOpts& m, int n_q) {
    MapConfig cfg;
    cfg.map = parse_map(m.map);
    cfg.n_q = n_q;
    cfg.L = m.L;
    cfg.K = m.K;
    cfg.a = m.a;
    if (m.delta_theta) {
        cfg.has_delta_theta = true;
        cfg.delta_theta_value = *m.delta_theta;
    }
    return cfg;
}

// Accepts "8", "4,6,8", and "4..7" (inclusive), also mixed: "3,6..8".
std::vector<int> parse_int_list(const std::string& text, const char* what) {
    std::vector<int> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        const std::string tok = text.substr(pos, comma - pos);
        pos = comma + 1;
        if (tok.empty()) continue;
        const std::size_t dots = tok.find("..");
        try {
            if (dots == std::string::npos) {
                out.push_back(std::stoi(tok));
            } else {
                const int lo = std::stoi(tok.substr(0, dots));
                const int hi = std::stoi(tok.substr(dots + 2));
                if (hi < lo)
                    throw std::runtime_error("empty range");
                for (int v = lo; v <= hi; ++v) out.push_back(v);
            }
        } catch (const std::exception&) {
            throw CLI::ValidationError(what, "cannot parse '" + tok + "'");
        }
    }
    if (out.empty()) throw CLI::ValidationError(what, "empty list");
    return out;
}

std::vector<double> parse_double_list(const std::string& text, const char* what) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        const std::string tok = text.substr(pos, comma - pos);
        pos = comma + 1;
        if (tok.empty()) continue;
        try {
            out.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw CLI::ValidationError(what, "cannot parse '" + tok + "'");
        }
    }
    if (out.empty()) throw CLI::ValidationError(what, "empty list");
    return out;
}

int default_realizations(MapKind map) {
    return map == MapKind::Sawtooth ? 500 : 200;
}

void write_points(const std::string& out, const std::vector<harness::SweepPoint>& pts) {
    if (out.empty() || out == "-") {
        harness::write_csv(std::cout, pts);
        return;
    }
    std::ofstream ofs(out, std::ios::binary);
    if (!ofs) throw std::runtime_error("cannot open output file: " + out);
    harness::write_csv(ofs, pts);
}

void print_cell_summary(const harness::SweepPoint& pt) {
    std::printf("%s n_q=%d eps=%g %s seed=%llu realizations=%d steps=%d\n",
                map_name(pt.cell.map.map), pt.cell.map.n_q, pt.cell.epsilon,
                decomposition_name(pt.cell.decomposition),
                static_cast<unsigned long long>(pt.cell.master_seed),
                pt.cell.realizations, pt.cell.steps);
    std::printf("  per-step gates: n1=%zu n2=%zu n_g=%zu\n", pt.n1, pt.n2, pt.n1 + pt.n2);
    if (!pt.mean_f.empty()) {
        const std::size_t T = pt.mean_f.size() - 1;
        std::printf("  final <f> = %.6f  sigma(f) = %.3g  sigma/(1-<f>) = %.4f\n",
                    pt.mean_f[T], pt.std_f[T], pt.ratio[T]);
    }
    if (pt.fit_ok) {
        std::printf("  Gamma_fit = %.6g +- %.2g   Gamma_th = %.6g   ratio = %.4f\n",
                    pt.gamma_fit, pt.gamma_se, pt.gamma_th, pt.gamma_ratio);
    } else {
        std::printf("  fit unavailable: %s\n", pt.fit_error.c_str());
    }
    if (!pt.wrong_cum.empty() && pt.wrong_cum.back() > 0)
        std::printf("  wrong ancilla measurements (cumulative): %llu\n",
                    static_cast<unsigned long long>(pt.wrong_cum.back()));
}

int cmd_simulate(const MapOpts& m, int n_q, double epsilon, int steps, int realizations,
                 std::uint64_t seed, const std::string& out, int workers) {
    harness::SweepCell cell;
    cell.map = make_map_config(m, n_q);
    cell.decomposition = parse_decomposition(m.decomposition);
    cell.epsilon = epsilon;
    cell.master_seed = seed;
    cell.realizations = realizations > 0 ? realizations : default_realizations(cell.map.map);
    cell.steps = steps;
    const harness::SweepPoint pt = harness::run_cell(cell, workers);
    write_points(out, {pt});
    if (!out.empty() && out != "-") print_cell_summary(pt);
    return 0;
}

int cmd_sweep(const MapOpts& m, const std::string& nq_list, const std::string& eps_list,
              int steps, int realizations, std::uint64_t seed, const std::string& out,
              int workers) {
    const std::vector<int> nqs = parse_int_list(nq_list, "--nq");
    const std::vector<double> epss = parse_double_list(eps_list, "--epsilon");
    std::vector<harness::SweepCell> cells;
    for (int n_q : nqs)
        for (double eps : epss) {
            harness::SweepCell cell;
            cell.map = make_map_config(m, n_q);
            cell.decomposition = parse_decomposition(m.decomposition);
            cell.epsilon = eps;
            cell.master_seed = seed;
            cell.realizations =
                realizations > 0 ? realizations : default_realizations(cell.map.map);
            cell.steps = steps;
            cells.push_back(cell);
        }
    const std::vector<harness::SweepPoint> pts = harness::run_sweep(cells, workers);
    write_points(out, pts);
    if (!out.empty() && out != "-")
        for (const harness::SweepPoint& pt : pts) print_cell_summary(pt);
    int bad = 0;
    for (const harness::SweepPoint& pt : pts)
        if (!pt.fit_ok && pt.mean_f.empty()) ++bad;
    if (bad > 0) {
        std::fprintf(stderr, "sweep: %d of %zu cells failed (recorded in-row)\n", bad,
                     pts.size());
    }
    return 0;
}

int cmd_theory(const MapOpts& m, int n_q, double epsilon, const std::string& dump_path) {
    const MapConfig cfg = make_map_config(m, n_q);
    const Decomposition strategy = parse_decomposition(m.decomposition);
    const CompiledCircuit circuit = map_step_circuit(cfg, strategy);
    const theory::TheoryPrediction pred = theory::predict(circuit, epsilon, n_q);

    std::printf("map=%s n_q=%d L=%d K=%g%s decomposition=%s\n", map_name(cfg.map), n_q,
                cfg.L, cfg.K,
                cfg.map == MapKind::DoubleWell ? (" a=" + std::to_string(cfg.a)).c_str() : "",
                decomposition_name(strategy));
    std::printf("per-step gates: n1=%zu n2=%zu n_g=%zu%s\n", circuit.n1, circuit.n2,
                circuit.n_g(), circuit.uses_ancilla ? " (+1 ancilla wire)" : "");
    std::printf("epsilon               = %.17g rad\n", epsilon);
    std::printf("sigma_star_sq         = %.17g\n", pred.sigma_star_sq);
    std::printf("A = N/(1+N)           = %.17g\n", pred.A);
    std::printf("Gamma_th per map step = %.17g\n", pred.gamma_th);
    std::printf("varsigma_star         = %.17g\n", pred.varsigma_star);
    std::printf("worst-case loss       = (n_g t)^2 * %.17g\n", pred.bound_coeff);
    std::printf("sigma(f)/(1-<f>) pred = %.17g\n", theory::fidelity_std_ratio(n_q));
    if (pred.gamma_th > 0.0)
        std::printf("steps to <f> = 0.9    = %.1f\n", 0.1 / pred.gamma_th);

    if (!dump_path.empty()) {
        if (dump_path == "-") {
            dump_circuit(std::cout, circuit, cfg, strategy);
        } else {
            std::ofstream ofs(dump_path, std::ios::binary);
            if (!ofs) throw std::runtime_error("cannot open dump file: " + dump_path);
            dump_circuit(ofs, circuit, cfg, strategy);
            std::printf("circuit dump written to %s\n", dump_path.c_str());
        }
    }
    return 0;
}

int cmd_haar(std::size_t N, std::size_t samples, std::uint64_t seed, double xi) {
    if (N < 2 || (N & 1))
        throw std::runtime_error("haar: N must be an even dimension >= 2");
    RngStream rng(seed, 0x48414152ull);
    std::printf("N=%zu xi=%g samples=%zu seed=%llu\n", N, xi, samples,
                static_cast<unsigned long long>(seed));
    std::printf("%-26s %14s %14s %12s %14s %14s %12s\n", "spectrum", "analytic_I2",
                "mc_I2", "se", "analytic_J2", "mc_J2", "se");

    auto row = [&](const char* name, const std::vector<double>& lambda) {
        const double ai2 = haar::analytic_I2(lambda);
        const double aj2 = haar::analytic_J2(lambda);
        const haar::MonteCarloEstimate i2 = haar::mc_I2(lambda, samples, rng);
        const haar::MonteCarloEstimate j2 = haar::mc_J2(lambda, samples, rng);
        std::printf("%-26s %14.9f %14.9f %12.2e %14.9f %14.9f %12.2e\n", name, ai2, i2.mean,
                    i2.std_error, aj2, j2.mean, j2.std_error);
    };

    std::vector<double> one_qubit;
    for (std::size_t j = 0; j < N / 2; ++j) {
        one_qubit.push_back(xi / 2.0);
        one_qubit.push_back(-xi / 2.0);
    }
    row("one-qubit {+xi/2,-xi/2}", one_qubit);

    if (N % 4 == 0) {
        std::vector<double> two_qubit;
        for (std::size_t j = 0; j < N / 4; ++j) {
            two_qubit.insert(two_qubit.end(), {0.0, 0.0, 0.0, xi});
        }
        row("two-qubit {0,0,0,xi}", two_qubit);
    }

    const haar::ConcentrationStats c = haar::concentration(N, samples, rng);
    std::printf("concentration: mean_p = %.9f (se %.2e)  var_p = %.9f (se %.2e)  "
                "predicted var 1/(4(1+N)) = %.9f\n",
                c.mean_p, c.se_mean, c.var_p, c.se_var, haar::predicted_var_p(N));
    return 0;
}

struct VerifyReport {
    int failures = 0;

    void line(const std::string& name, bool ok, double value, double tol) {
        std::printf("%-52s %s  (max dev %.3e, tol %.0e)\n", name.c_str(),
                    ok ? "PASS" : "FAIL", value, tol);
        if (!ok) ++failures;
    }
};

int cmd_verify(int n_q, std::uint64_t seed, int workers) {
    (void)workers;
    VerifyReport rep;

    // Dense one-period operator against the compiled circuit, both maps.
    for (MapKind map : {MapKind::Sawtooth, MapKind::DoubleWell}) {
        MapOpts m;
        m.map = map == MapKind::Sawtooth ? "sawtooth" : "double-well";
        const MapConfig cfg = make_map_config(m, n_q);
        const oracle::CMat want = oracle::floquet_operator(cfg);
        for (Decomposition strategy : {Decomposition::AncillaEager, Decomposition::AncillaMin}) {
            const CompiledCircuit circuit = map_step_circuit(cfg, strategy);
            oracle::CMat got = oracle::circuit_unitary(circuit.gates, circuit.total_wires());
            double leak = 0.0;
            if (circuit.uses_ancilla)
                got = oracle::restrict_to_ancilla_zero(got, circuit.n_system, &leak);
            const double dev = oracle::max_deviation_up_to_phase(got, want);
            rep.line(std::string("one-period operator ") + map_name(map) + " " +
                         decomposition_name(strategy),
                     dev < 1e-9 && leak < 1e-9, std::max(dev, leak), 1e-9);
            if (map == MapKind::Sawtooth) break;  // decomposition-independent (no ancilla)
        }
    }

    // Collected diagonal circuits against dense diag(exp(2 pi i beta j^p)).
    {
        RngStream rng(seed, 0x434f4c4cull);
        double worst = 0.0;
        const std::size_t N = std::size_t{1} << n_q;
        for (int p = 1; p <= 4; ++p) {
            for (int rep_i = 0; rep_i < 5; ++rep_i) {
                const double beta_val = rng.next_uniform() - 0.5;
                const FixedPointPhase beta = FixedPointPhase::from_double(beta_val);
                std::vector<Gate> gates;
                for (const MultiControlledPhase& mc : exponentiation_circuit(beta, p, n_q))
                    for (const Gate& g :
                         compile_multi_controlled(mc, Decomposition::AncillaMin,
                                                  n_q >= 4 ? std::optional<int>(n_q)
                                                           : std::nullopt))
                        gates.push_back(g);
                bool has_mr = false;
                for (const Gate& g : gates)
                    if (g.kind == GateKind::MeasureReset) has_mr = true;
                std::vector<Gate> unitary_gates;
                for (const Gate& g : gates)
                    if (g.kind != GateKind::MeasureReset) unitary_gates.push_back(g);
                const int wires = n_q + (has_mr || n_q >= 4 ? 1 : 0);
                oracle::CMat got = oracle::circuit_unitary(
                    unitary_gates, std::max(wires, n_q));
                double leak = 0.0;
                if (got.n > N) got = oracle::restrict_to_ancilla_zero(got, n_q, &leak);
                // Reference phases in the same 128-bit fixed point (beta j^p
                // drops double precision long before j^p overflows).
                std::vector<cx> diag(N);
                for (std::size_t j = 0; j < N; ++j) {
                    std::uint64_t jp = 1;
                    for (int q = 0; q < p; ++q) jp *= j;
                    const double ph = beta.times(jp).to_radians();
                    diag[j] = cx(std::cos(ph), std::sin(ph));
                }
                const double dev =
                    oracle::max_deviation_up_to_phase(got, oracle::CMat::diagonal(diag));
                worst = std::max(worst, std::max(dev, leak));
            }
        }
        rep.line("collected diagonal circuits p=1..4", worst < 1e-9, worst, 1e-9);
    }

    // Haar closed forms at modest sample counts (5 s.e. guard band).
    {
        RngStream rng(seed, 0x48434845ull);
        const std::size_t N = std::size_t{1} << n_q;
        const double xi = 0.1;
        std::vector<double> lambda;
        for (std::size_t j = 0; j < N / 2; ++j) {
            lambda.push_back(xi / 2.0);
            lambda.push_back(-xi / 2.0);
        }
        const haar::MonteCarloEstimate i2 = haar::mc_I2(lambda, 20000, rng);
        const haar::MonteCarloEstimate j2 = haar::mc_J2(lambda, 20000, rng);
        const double di2 = std::abs(i2.mean - haar::analytic_I2(lambda));
        const double dj2 = std::abs(j2.mean - haar::analytic_J2(lambda));
        rep.line("Haar I2 Monte Carlo vs closed form", di2 < 5.0 * i2.std_error, di2,
                 5.0 * i2.std_error);
        rep.line("Haar J2 Monte Carlo vs closed form", dj2 < 5.0 * j2.std_error, dj2,
                 5.0 * j2.std_error);
    }

    std::printf("%s\n", rep.failures == 0 ? "all checks passed" : "CHECKS FAILED");
    return rep.failures == 0 ? 0 : 1;
}

int cmd_forward_backward(const MapOpts& m, int n_q, double epsilon, int prefix_steps,
                         int realizations, std::uint64_t seed, int workers) {
    harness::SweepCell cell;
    cell.map = make_map_config(m, n_q);
    cell.decomposition = parse_decomposition(m.decomposition);
    cell.epsilon = epsilon;
    cell.master_seed = seed;
    cell.realizations = realizations > 0 ? realizations : default_realizations(cell.map.map);
    cell.steps = 2 * prefix_steps;

    const CompiledCircuit circuit = map_step_circuit(cell.map, cell.decomposition);
    NoiseConfig noise;
    noise.epsilon = epsilon;
    noise.master_seed = seed;

    const harness::ReturnEstimate ret = harness::forward_backward_probability(
        circuit, noise, prefix_steps, cell.realizations, workers);

    // Lockstep reference at the same total gate count (2 x prefix steps).
    harness::SweepCell ref = cell;
    ref.master_seed = seed + 1;  // independent draws for the reference ensemble
    const harness::SweepPoint pt = harness::run_cell(ref, workers);
    const std::size_t T = pt.mean_f.size() - 1;
    const double lock_mean = pt.mean_f[T];
    const double lock_se = pt.std_f[T] / std::sqrt(static_cast<double>(cell.realizations));

    const double diff = ret.mean - lock_mean;
    const double comb = std::sqrt(ret.std_error * ret.std_error + lock_se * lock_se);
    std::printf("forward-backward: map=%s n_q=%d eps=%g prefix_steps=%d realizations=%d\n",
                map_name(cell.map.map), n_q, epsilon, prefix_steps, cell.realizations);
    std::printf("return probability        = %.9f +- %.2e\n", ret.mean, ret.std_error);
    std::printf("lockstep <f> at %2d steps  = %.9f +- %.2e\n", 2 * prefix_steps, lock_mean,
                lock_se);
    std::printf("difference                = %+.3e (%.2f combined s.e.)\n", diff,
                comb > 0.0 ? std::abs(diff) / comb : 0.0);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Noisy quantum map simulator: compiles torus maps onto a "
        "{H, phase, controlled-phase, measure-reset} alphabet, runs Monte Carlo "
        "fidelity-decay experiments, and checks them against closed-form theory.\n"
        "Angles are radians; steps count map iterations; epsilon is the control "
        "error intensity (radians).  QMAPS_WORKERS overrides the worker count."};
    app.require_subcommand(1);
    app.set_config("--config", "", "Key=value file with option defaults (flags override)");

    MapOpts m;
    int n_q = 8;
    std::string nq_list = "8";
    double epsilon = 0.005;
    std::string eps_list = "0.005";
    int steps = 30;
    int realizations = -1;
    std::uint64_t seed = 42;
    std::string out;
    int workers = 0;
    int prefix_steps = 5;
    std::size_t haar_N = 8;
    std::size_t haar_samples = 100000;
    double haar_xi = 0.1;
    std::string dump_path;

    auto add_map_opts = [&](CLI::App* sub) {
        sub->add_option("--map", m.map, "Map kind")
            ->check(CLI::IsMember({"sawtooth", "double-well"}))
            ->capture_default_str();
        sub->add_option("--L", m.L, "Torus winding number (cells)")->capture_default_str();
        sub->add_option("--K", m.K, "Classical kick strength")->capture_default_str();
        sub->add_option("--a", m.a, "Double-well shape parameter in (y^2 - a^2)^2")
            ->capture_default_str();
        sub->add_option("--delta-theta", m.delta_theta,
                        "Grid offset (default (1 - 2^nq)/2, centers the grid)");
        sub->add_option("--decomposition", m.decomposition,
                        "Multi-controlled phase compilation strategy")
            ->check(CLI::IsMember({"ancilla-eager", "ancilla-min"}))
            ->capture_default_str();
    };
    auto add_run_opts = [&](CLI::App* sub) {
        sub->add_option("--seed", seed, "Master seed; fixes every random draw")
            ->capture_default_str();
        sub->add_option("--realizations", realizations,
                        "Noise realizations per cell (default 500 sawtooth, 200 double-well)");
        sub->add_option("--workers", workers,
                        "Worker threads (0 = QMAPS_WORKERS env, else hardware)")
            ->capture_default_str();
    };

    CLI::App* sim = app.add_subcommand(
        "simulate", "Run one (map, n_q, epsilon) cell and write per-step CSV");
    add_map_opts(sim);
    add_run_opts(sim);
    sim->add_option("--nq", n_q, "Register size in qubits")->capture_default_str();
    sim->add_option("--epsilon", epsilon, "Error intensity (radians)")->capture_default_str();
    sim->add_option("--steps", steps, "Map iterations")->capture_default_str();
    sim->add_option("--out", out, "CSV path ('-' or empty = stdout)");

    CLI::App* swp = app.add_subcommand(
        "sweep", "Run a grid of cells (all n_q x epsilon combinations) and write CSV");
    add_map_opts(swp);
    add_run_opts(swp);
    swp->add_option("--nq", nq_list, "Register sizes: '8', '4,6,8', or '4..7'")
        ->capture_default_str();
    swp->add_option("--epsilon", eps_list, "Error intensities (radians), comma-separated")
        ->capture_default_str();
    swp->add_option("--steps", steps, "Map iterations per cell")->capture_default_str();
    swp->add_option("--out", out, "CSV path ('-' or empty = stdout)");

    CLI::App* thy = app.add_subcommand(
        "theory", "Print closed-form decay predictions for a compiled map circuit");
    add_map_opts(thy);
    thy->add_option("--nq", n_q, "Register size in qubits")->capture_default_str();
    thy->add_option("--epsilon", epsilon, "Error intensity (radians)")->capture_default_str();
    thy->add_option("--dump-circuit", dump_path,
                    "Write the compiled gate list to this path ('-' = stdout)");

    CLI::App* har = app.add_subcommand(
        "haar", "Monte Carlo vs closed-form Haar moments of diagonal error operators");
    har->add_option("--N", haar_N, "Hilbert space dimension (even)")->capture_default_str();
    har->add_option("--samples", haar_samples, "Haar samples per estimate")
        ->capture_default_str();
    har->add_option("--seed", seed, "Master seed")->capture_default_str();
    har->add_option("--xi", haar_xi, "Error rotation angle (radians)")->capture_default_str();

    CLI::App* ver = app.add_subcommand(
        "verify", "Dense-matrix oracle checks of the compiled circuits (small registers)");
    ver->add_option("--nq", n_q, "Register size in qubits (<= 7; dense cost)")
        ->capture_default_str();
    ver->add_option("--seed", seed, "Master seed")->capture_default_str();

    CLI::App* fb = app.add_subcommand(
        "forward-backward",
        "Return-probability protocol: prefix forward, adjoint back, report P(|0...0>)");
    add_map_opts(fb);
    add_run_opts(fb);
    fb->add_option("--nq", n_q, "Register size in qubits")->capture_default_str();
    fb->add_option("--epsilon", epsilon, "Error intensity (radians)")->capture_default_str();
    fb->add_option("--prefix-steps", prefix_steps, "Forward map iterations before the adjoint")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sim->parsed())
            return cmd_simulate(m, n_q, epsilon, steps, realizations, seed, out, workers);
        if (swp->parsed())
            return cmd_sweep(m, nq_list, eps_list, steps, realizations, seed, out, workers);
        if (thy->parsed()) return cmd_theory(m, n_q, epsilon, dump_path);
        if (har->parsed()) return cmd_haar(haar_N, haar_samples, seed, haar_xi);
        if (ver->parsed()) return cmd_verify(n_q, seed, workers);
        if (fb->parsed())
            return cmd_forward_backward(m, n_q, epsilon, prefix_steps, realizations, seed,
                                        workers);
    } catch (const CLI::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
