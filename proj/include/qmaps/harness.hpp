#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "qmaps/mapcircuits.hpp"
#include "qmaps/noise.hpp"
#include "qmaps/theory.hpp"

namespace qmaps {

// Monte Carlo driver: ideal and noisy copies of the register are evolved in
// lockstep through repeated map steps, the overlap recorded at every step
// boundary (coordinate representation, after the closing Fourier half).
// Error draws are keyed by (master_seed, realization, global gate index)
// counted over the whole run, so a trace is reproducible in isolation and
// the ensemble is reproducible for any worker count.
namespace harness {

struct FidelityTrace {
    // f[t] for t = 0..t_max; f[0] = 1.
    std::vector<double> f;
    // (map step, global gate index) of each wrong ancilla measurement; empty
    // unless the circuit measures.
    std::vector<std::pair<int, std::uint64_t>> wrong_measurements;
};

// Evolves one noise realization for t_max map steps.  Throws
// std::runtime_error on norm drift beyond 1e-8 or, for measurement-free
// circuits, on a violation of the worst-case unitary bound
// 1 - f <= (n_g t)^2 eps^2 / 64 + 1e-9.
FidelityTrace run_realization(const CompiledCircuit& circuit, const NoiseConfig& cfg,
                              std::uint64_t realization, int t_max);

// Least-squares slope through the origin of 1 - <f> versus t, restricted to
// steps with <f> >= 0.9.  Throws std::runtime_error when fewer than 5 steps
// qualify.
struct FitResult {
    double gamma = 0.0;
    double rms_residual = 0.0;
    std::vector<int> window;  // steps used
};

FitResult fit_gamma(const std::vector<double>& mean_f);

// Ensemble statistics at one step: mean, sample standard deviation (n-1),
// and sigma(f) / (1 - <f>).  Throws std::runtime_error when 1 - <f> falls
// below 1e-12 (ratio undefined).
struct FluctuationStats {
    double mean = 0.0;
    double stddev = 0.0;
    double ratio = 0.0;
};

FluctuationStats fluctuation_stats(const std::vector<FidelityTrace>& traces, int t);

struct SweepCell {
    MapConfig map;
    Decomposition decomposition = Decomposition::AncillaEager;
    double epsilon = 0.0;
    std::uint64_t master_seed = 0;
    int realizations = 0;
    int steps = 0;
};

struct SweepPoint {
    SweepCell cell;
    std::size_t n1 = 0, n2 = 0;        // per map step
    std::vector<double> mean_f;        // index t = 0..steps
    std::vector<double> std_f;
    std::vector<double> ratio;         // sigma / (1 - mean); NaN where undefined
    std::vector<std::uint64_t> wrong_cum;  // wrong measurements through step t
    double gamma_fit = 0.0;
    double gamma_se = 0.0;             // delete-one jackknife over realizations
    double gamma_th = 0.0;
    double gamma_ratio = 0.0;
    double ratio_final = 0.0;          // sigma/(1-<f>) at the last step
    double ratio_final_se = 0.0;       // jackknife
    bool fit_ok = false;
    std::string fit_error;
    // Per-realization fidelities at the final step (kept for acceptance
    // statistics; realization-ordered).
    std::vector<double> final_f;
};

// Runs one grid cell: realizations in parallel over `workers` threads
// (0 = QMAPS_WORKERS env var, else hardware concurrency), aggregation in
// realization order so results are byte-identical for any worker count.
// traces_out, when given, receives every trace in realization order.
SweepPoint run_cell(const SweepCell& cell, int workers,
                    std::vector<FidelityTrace>* traces_out = nullptr);

std::vector<SweepPoint> run_sweep(const std::vector<SweepCell>& cells, int workers);

// Return-probability protocol: |0..0> evolved through prefix_steps noisy map
// steps and then through the adjoint gate list with fresh draws; reports the
// probability of returning to |0..0> (the fidelity of a 2 x prefix_steps
// step identity algorithm).  Throws std::invalid_argument if the circuit
// contains measurements.
struct ReturnEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t realizations = 0;
};

ReturnEstimate forward_backward_probability(const CompiledCircuit& circuit,
                                            const NoiseConfig& cfg, int prefix_steps,
                                            int realizations, int workers);

// CSV emission (17 significant digits, one row per step starting at t = 1).
extern const char* kCsvHeader;
void write_csv(std::ostream& os, const std::vector<SweepPoint>& points);
std::string csv_string(const std::vector<SweepPoint>& points);

// Worker resolution: explicit > 0 wins, else QMAPS_WORKERS, else hardware.
int resolve_workers(int requested);

}  // namespace harness
}  // namespace qmaps
