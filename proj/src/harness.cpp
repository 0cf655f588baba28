#include "qmaps/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace qmaps::harness {

namespace {

void apply_noisy_op(StateVector& psi, const NoisyOp& op) {
    if (const Gate* g = std::get_if<Gate>(&op)) {
        apply_gate(psi, *g);
    } else {
        const MatrixOp& m = std::get<MatrixOp>(op);
        psi.apply_1q(m.q, m.m);
    }
}

std::vector<Gate> effective_gates(const CompiledCircuit& circuit,
                                  const NoiseConfig& cfg) {
    if (cfg.atomic_phase) return quantize_phases(circuit.gates, *cfg.atomic_phase);
    return circuit.gates;
}

// One noisy map step over the gate list; k is the global gate counter.
void advance_noisy(StateVector& noisy, const std::vector<Gate>& gates,
                   const NoiseConfig& cfg, std::uint64_t realization,
                   std::uint64_t& k, int t, FidelityTrace& trace) {
    for (const Gate& g : gates) {
        if (g.kind == GateKind::MeasureReset) {
            const double u = draw_uniform(cfg, realization, k);
            if (noisy.reset_qubit_to_zero(g.q0, u))
                trace.wrong_measurements.emplace_back(t, k);
        } else {
            for (const NoisyOp& op : perturb(g, draw_errors(cfg, realization, k)))
                apply_noisy_op(noisy, op);
        }
        ++k;
    }
}

void advance_ideal(StateVector& ideal, const std::vector<Gate>& gates) {
    for (const Gate& g : gates) {
        if (g.kind == GateKind::MeasureReset) continue;  // ancilla already |0>
        apply_gate(ideal, g);
    }
}

void check_norm(const StateVector& psi, const char* leg) {
    const double drift = std::abs(psi.norm_sq() - 1.0);
    if (drift > 1e-8)
        throw std::runtime_error(std::string("harness: ") + leg +
                                 " state norm drifted beyond 1e-8");
}

void check_bound(double f, const CompiledCircuit& circuit, const NoiseConfig& cfg,
                 int t) {
    const double loss = 1.0 - f;
    const double bound =
        theory::fidelity_bound(circuit.n_g() * static_cast<std::size_t>(t), cfg.epsilon);
    if (loss > bound + 1e-9)
        throw std::runtime_error(
            "harness: fidelity loss exceeded the worst-case unitary bound");
}

struct CellContext {
    CompiledCircuit circuit;
    std::vector<Gate> gates;  // possibly phase-quantized
    NoiseConfig noise;
    std::vector<StateVector> ideal_at_step;  // index t = 0..steps
    bool unitary_only = false;
};

CellContext prepare_cell(const SweepCell& cell) {
    CellContext ctx{map_step_circuit(cell.map, cell.decomposition), {}, {}, {}, false};
    ctx.noise.epsilon = cell.epsilon;
    ctx.noise.master_seed = cell.master_seed;
    ctx.gates = effective_gates(ctx.circuit, ctx.noise);
    ctx.unitary_only = !ctx.circuit.has_measurement();

    StateVector ideal = initial_state(ctx.circuit);
    ctx.ideal_at_step.reserve(static_cast<std::size_t>(cell.steps) + 1);
    ctx.ideal_at_step.push_back(ideal);
    for (int t = 1; t <= cell.steps; ++t) {
        advance_ideal(ideal, ctx.gates);
        check_norm(ideal, "ideal");
        ctx.ideal_at_step.push_back(ideal);
    }
    return ctx;
}

FidelityTrace run_noisy_against(const CellContext& ctx, std::uint64_t realization,
                                int t_max) {
    FidelityTrace trace;
    trace.f.reserve(static_cast<std::size_t>(t_max) + 1);
    trace.f.push_back(1.0);
    StateVector noisy = initial_state(ctx.circuit);
    std::uint64_t k = 0;
    for (int t = 1; t <= t_max; ++t) {
        advance_noisy(noisy, ctx.gates, ctx.noise, realization, k, t, trace);
        check_norm(noisy, "noisy");
        const double f = noisy.fidelity(ctx.ideal_at_step[static_cast<std::size_t>(t)]);
        if (ctx.unitary_only) check_bound(f, ctx.circuit, ctx.noise, t);
        trace.f.push_back(f);
    }
    return trace;
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& body) {
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex err_mutex;
    auto worker = [&]() {
        while (!failed.load(std::memory_order_relaxed)) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) break;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
                failed.store(true);
            }
        }
    };
    std::vector<std::thread> pool;
    const int count = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
    pool.reserve(static_cast<std::size_t>(count));
    for (int w = 0; w < count; ++w) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

double fmt_guard(double x) { return std::isfinite(x) ? x : std::numeric_limits<double>::quiet_NaN(); }

void append_g17(std::string& out, double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", fmt_guard(x));
    out += buf;
}

}  // namespace

FidelityTrace run_realization(const CompiledCircuit& circuit, const NoiseConfig& cfg,
                              std::uint64_t realization, int t_max) {
    if (t_max < 0)
        throw std::invalid_argument("run_realization: negative step count");
    // Lockstep evolution; the per-cell path precomputes the same ideal states.
    CellContext ctx{circuit, effective_gates(circuit, cfg), cfg, {}, !circuit.has_measurement()};
    StateVector ideal = initial_state(circuit);
    ctx.ideal_at_step.push_back(ideal);
    for (int t = 1; t <= t_max; ++t) {
        advance_ideal(ideal, ctx.gates);
        check_norm(ideal, "ideal");
        ctx.ideal_at_step.push_back(ideal);
    }
    return run_noisy_against(ctx, realization, t_max);
}

FitResult fit_gamma(const std::vector<double>& mean_f) {
    FitResult r;
    double st2 = 0.0, sty = 0.0;
    for (std::size_t t = 1; t < mean_f.size(); ++t) {
        if (mean_f[t] < 0.9) continue;
        const double td = static_cast<double>(t);
        st2 += td * td;
        sty += td * (1.0 - mean_f[t]);
        r.window.push_back(static_cast<int>(t));
    }
    if (r.window.size() < 5)
        throw std::runtime_error("fit_gamma: fewer than 5 steps with <f> >= 0.9");
    r.gamma = sty / st2;
    double ss = 0.0;
    for (int t : r.window) {
        const double res = (1.0 - mean_f[static_cast<std::size_t>(t)]) -
                           r.gamma * static_cast<double>(t);
        ss += res * res;
    }
    r.rms_residual = std::sqrt(ss / static_cast<double>(r.window.size()));
    return r;
}

FluctuationStats fluctuation_stats(const std::vector<FidelityTrace>& traces, int t) {
    if (traces.size() < 2)
        throw std::invalid_argument("fluctuation_stats: need at least 2 traces");
    const auto ts = static_cast<std::size_t>(t);
    double sum = 0.0;
    for (const FidelityTrace& tr : traces) {
        if (ts >= tr.f.size())
            throw std::invalid_argument("fluctuation_stats: step out of range");
        sum += tr.f[ts];
    }
    const double n = static_cast<double>(traces.size());
    FluctuationStats st;
    st.mean = sum / n;
    double ss = 0.0;
    for (const FidelityTrace& tr : traces) {
        const double d = tr.f[ts] - st.mean;
        ss += d * d;
    }
    st.stddev = std::sqrt(ss / (n - 1.0));
    const double loss = 1.0 - st.mean;
    if (loss < 1e-12)
        throw std::runtime_error("fluctuation_stats: 1 - <f> below 1e-12, ratio undefined");
    st.ratio = st.stddev / loss;
    return st;
}

SweepPoint run_cell(const SweepCell& cell, int workers,
                    std::vector<FidelityTrace>* traces_out) {
    if (cell.realizations < 2)
        throw std::invalid_argument("run_cell: need at least 2 realizations");
    if (cell.steps < 1)
        throw std::invalid_argument("run_cell: need at least 1 step");

    const CellContext ctx = prepare_cell(cell);
    const int nw = resolve_workers(workers);

    std::vector<FidelityTrace> traces(static_cast<std::size_t>(cell.realizations));
    parallel_for(traces.size(), nw, [&](std::size_t r) {
        traces[r] = run_noisy_against(ctx, static_cast<std::uint64_t>(r), cell.steps);
    });

    SweepPoint pt;
    pt.cell = cell;
    pt.n1 = ctx.circuit.n1;
    pt.n2 = ctx.circuit.n2;

    const auto T = static_cast<std::size_t>(cell.steps);
    const double n = static_cast<double>(cell.realizations);
    pt.mean_f.assign(T + 1, 0.0);
    pt.std_f.assign(T + 1, 0.0);
    pt.ratio.assign(T + 1, std::numeric_limits<double>::quiet_NaN());
    pt.wrong_cum.assign(T + 1, 0);
    pt.mean_f[0] = 1.0;

    // Realization-ordered accumulation: bitwise reproducible.
    for (std::size_t t = 1; t <= T; ++t) {
        double sum = 0.0;
        for (const FidelityTrace& tr : traces) sum += tr.f[t];
        const double mean = sum / n;
        double ss = 0.0;
        for (const FidelityTrace& tr : traces) {
            const double d = tr.f[t] - mean;
            ss += d * d;
        }
        pt.mean_f[t] = mean;
        pt.std_f[t] = std::sqrt(ss / (n - 1.0));
        const double loss = 1.0 - mean;
        if (loss >= 1e-12) pt.ratio[t] = pt.std_f[t] / loss;
    }
    for (const FidelityTrace& tr : traces)
        for (const auto& [t, k] : tr.wrong_measurements)
            for (std::size_t u = static_cast<std::size_t>(t); u <= T; ++u)
                ++pt.wrong_cum[u];

    pt.final_f.reserve(traces.size());
    for (const FidelityTrace& tr : traces) pt.final_f.push_back(tr.f[T]);

    pt.gamma_th = theory::predict(ctx.circuit, cell.epsilon, cell.map.n_q).gamma_th;
    try {
        const FitResult fit = fit_gamma(pt.mean_f);
        pt.gamma_fit = fit.gamma;
        pt.fit_ok = true;

        // Delete-one jackknife on the fitted slope, fixed window.
        double st2 = 0.0;
        for (int t : fit.window) st2 += static_cast<double>(t) * static_cast<double>(t);
        std::vector<double> jack(traces.size());
        double jmean = 0.0;
        for (std::size_t i = 0; i < traces.size(); ++i) {
            double sty = 0.0;
            for (int t : fit.window) {
                const auto ts = static_cast<std::size_t>(t);
                const double mean_i = (pt.mean_f[ts] * n - traces[i].f[ts]) / (n - 1.0);
                sty += static_cast<double>(t) * (1.0 - mean_i);
            }
            jack[i] = sty / st2;
            jmean += jack[i];
        }
        jmean /= n;
        double jss = 0.0;
        for (double g : jack) jss += (g - jmean) * (g - jmean);
        pt.gamma_se = std::sqrt((n - 1.0) / n * jss);
        pt.gamma_ratio = pt.gamma_fit / pt.gamma_th;
    } catch (const std::exception& e) {
        pt.fit_ok = false;
        pt.fit_error = e.what();
        pt.gamma_fit = std::numeric_limits<double>::quiet_NaN();
        pt.gamma_se = std::numeric_limits<double>::quiet_NaN();
        pt.gamma_ratio = std::numeric_limits<double>::quiet_NaN();
    }

    // Jackknife on the final-step fluctuation ratio.
    pt.ratio_final = pt.ratio[T];
    pt.ratio_final_se = std::numeric_limits<double>::quiet_NaN();
    if (std::isfinite(pt.ratio_final)) {
        double sum = 0.0, sum_sq = 0.0;
        for (double f : pt.final_f) {
            sum += f;
            sum_sq += f * f;
        }
        std::vector<double> jack(traces.size());
        double jmean = 0.0;
        bool ok = true;
        for (std::size_t i = 0; i < traces.size(); ++i) {
            const double fi = pt.final_f[i];
            const double mean_i = (sum - fi) / (n - 1.0);
            const double ss_i =
                (sum_sq - fi * fi) - (n - 1.0) * mean_i * mean_i;
            const double var_i = ss_i / (n - 2.0);
            const double loss_i = 1.0 - mean_i;
            if (loss_i < 1e-12 || var_i < 0.0) {
                ok = false;
                break;
            }
            jack[i] = std::sqrt(var_i) / loss_i;
            jmean += jack[i];
        }
        if (ok) {
            jmean /= n;
            double jss = 0.0;
            for (double g : jack) jss += (g - jmean) * (g - jmean);
            pt.ratio_final_se = std::sqrt((n - 1.0) / n * jss);
        }
    }

    if (traces_out) *traces_out = std::move(traces);
    return pt;
}

std::vector<SweepPoint> run_sweep(const std::vector<SweepCell>& cells, int workers) {
    std::vector<SweepPoint> points;
    points.reserve(cells.size());
    for (const SweepCell& cell : cells) {
        // A failing cell is recorded in-row (no steps, fit_error set) and the
        // sweep moves on.
        try {
            points.push_back(run_cell(cell, workers));
        } catch (const std::exception& e) {
            SweepPoint pt;
            pt.cell = cell;
            pt.fit_ok = false;
            pt.fit_error = e.what();
            pt.gamma_fit = std::numeric_limits<double>::quiet_NaN();
            pt.gamma_se = std::numeric_limits<double>::quiet_NaN();
            pt.gamma_th = std::numeric_limits<double>::quiet_NaN();
            pt.gamma_ratio = std::numeric_limits<double>::quiet_NaN();
            points.push_back(std::move(pt));
        }
    }
    return points;
}

ReturnEstimate forward_backward_probability(const CompiledCircuit& circuit,
                                            const NoiseConfig& cfg, int prefix_steps,
                                            int realizations, int workers) {
    if (circuit.has_measurement())
        throw std::invalid_argument(
            "forward_backward_probability: prefix contains ancilla measurements");
    if (prefix_steps < 1)
        throw std::invalid_argument("forward_backward_probability: need >= 1 prefix step");
    if (realizations < 2)
        throw std::invalid_argument("forward_backward_probability: need >= 2 realizations");

    const std::vector<Gate> gates = effective_gates(circuit, cfg);
    std::vector<Gate> adjoint;
    adjoint.reserve(gates.size());
    for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
        Gate g = *it;
        if (g.kind == GateKind::Phase)
            g = Gate::phase(g.q0, -g.phi);
        else if (g.kind == GateKind::ControlledPhase)
            g = Gate::controlled_phase(g.q0, g.q1, -g.phi);
        adjoint.push_back(g);
    }

    std::vector<double> prob(static_cast<std::size_t>(realizations));
    parallel_for(prob.size(), resolve_workers(workers), [&](std::size_t r) {
        StateVector psi = StateVector::basis_state(circuit.total_wires(), 0);
        std::uint64_t k = 0;
        for (int s = 0; s < prefix_steps; ++s)
            for (const Gate& g : gates) {
                for (const NoisyOp& op : perturb(g, draw_errors(cfg, r, k)))
                    apply_noisy_op(psi, op);
                ++k;
            }
        for (int s = 0; s < prefix_steps; ++s)
            for (const Gate& g : adjoint) {
                for (const NoisyOp& op : perturb(g, draw_errors(cfg, r, k)))
                    apply_noisy_op(psi, op);
                ++k;
            }
        check_norm(psi, "forward-backward");
        prob[r] = std::norm(psi.amplitudes()[0]);
    });

    double sum = 0.0, sum_sq = 0.0;
    for (double p : prob) {
        sum += p;
        sum_sq += p * p;
    }
    const double n = static_cast<double>(realizations);
    ReturnEstimate est;
    est.realizations = static_cast<std::size_t>(realizations);
    est.mean = sum / n;
    // Clamp: a degenerate ensemble (identical draws) can round slightly negative.
    const double var = std::max(0.0, (sum_sq - sum * sum / n) / (n - 1.0));
    est.std_error = std::sqrt(var / n);
    return est;
}

const char* kCsvHeader =
    "map,n_q,epsilon,decomposition,seed,realizations,step,mean_f,std_f,ratio,"
    "gamma_fit,gamma_th,gamma_ratio,n1,n2,n_g,wrong_meas_count";

void write_csv(std::ostream& os, const std::vector<SweepPoint>& points) {
    os << kCsvHeader << "\n";
    std::string line;
    for (const SweepPoint& pt : points) {
        for (std::size_t t = 1; t < pt.mean_f.size(); ++t) {
            line.clear();
            line += map_name(pt.cell.map.map);
            line += ',';
            line += std::to_string(pt.cell.map.n_q);
            line += ',';
            append_g17(line, pt.cell.epsilon);
            line += ',';
            line += decomposition_name(pt.cell.decomposition);
            line += ',';
            line += std::to_string(pt.cell.master_seed);
            line += ',';
            line += std::to_string(pt.cell.realizations);
            line += ',';
            line += std::to_string(t);
            line += ',';
            append_g17(line, pt.mean_f[t]);
            line += ',';
            append_g17(line, pt.std_f[t]);
            line += ',';
            append_g17(line, pt.ratio[t]);
            line += ',';
            append_g17(line, pt.gamma_fit);
            line += ',';
            append_g17(line, pt.gamma_th);
            line += ',';
            append_g17(line, pt.gamma_ratio);
            line += ',';
            line += std::to_string(pt.n1);
            line += ',';
            line += std::to_string(pt.n2);
            line += ',';
            line += std::to_string(pt.n1 + pt.n2);
            line += ',';
            line += std::to_string(pt.wrong_cum[t]);
            line += '\n';
            os << line;
        }
    }
}

std::string csv_string(const std::vector<SweepPoint>& points) {
    std::ostringstream ss;
    write_csv(ss, points);
    return ss.str();
}

int resolve_workers(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("QMAPS_WORKERS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0 && v < 1024) return static_cast<int>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace qmaps::harness
