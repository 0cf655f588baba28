#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qmaps/harness.hpp"

using namespace qmaps;
using harness::FidelityTrace;
using harness::SweepCell;
using harness::SweepPoint;

namespace {

SweepCell tiny_sawtooth_cell(double epsilon, int realizations, int steps,
                             std::uint64_t seed) {
    SweepCell cell;
    cell.map.map = MapKind::Sawtooth;
    cell.map.n_q = 3;
    cell.epsilon = epsilon;
    cell.master_seed = seed;
    cell.realizations = realizations;
    cell.steps = steps;
    return cell;
}

std::size_t count_char(const std::string& s, char c) {
    std::size_t n = 0;
    for (char x : s)
        if (x == c) ++n;
    return n;
}

}  // namespace

TEST_CASE("slope fit through the origin") {
    SUBCASE("an exact line is recovered to rounding") {
        const double gamma = 0.001;
        std::vector<double> mean_f(21);
        for (int t = 0; t <= 20; ++t) mean_f[static_cast<std::size_t>(t)] = 1.0 - gamma * t;
        const harness::FitResult fit = harness::fit_gamma(mean_f);
        CHECK(std::abs(fit.gamma / gamma - 1.0) < 1e-12);
        CHECK(fit.rms_residual < 1e-15);
        CHECK(fit.window.size() == 20);
        CHECK(fit.window.front() == 1);
        CHECK(fit.window.back() == 20);
    }
    SUBCASE("a gentle exponential fits its initial rate") {
        const double gamma = 0.002;
        std::vector<double> mean_f(21);
        for (int t = 0; t <= 20; ++t)
            mean_f[static_cast<std::size_t>(t)] = std::exp(-gamma * t);
        const harness::FitResult fit = harness::fit_gamma(mean_f);
        CHECK(std::abs(fit.gamma / gamma - 1.0) < 0.02);
    }
    SUBCASE("a flat run fits zero") {
        const std::vector<double> mean_f(10, 1.0);
        CHECK(harness::fit_gamma(mean_f).gamma == 0.0);
    }
    SUBCASE("steps below the fidelity floor are excluded") {
        std::vector<double> mean_f = {1.0, 0.99, 0.5, 0.98, 0.97, 0.4, 0.96, 0.95};
        const harness::FitResult fit = harness::fit_gamma(mean_f);
        CHECK(fit.window == std::vector<int>{1, 3, 4, 6, 7});
    }
    SUBCASE("fewer than five usable steps is an error") {
        CHECK_THROWS_AS(harness::fit_gamma({1.0, 0.99, 0.98, 0.97, 0.5, 0.4}),
                        std::runtime_error);
        CHECK_THROWS_AS(harness::fit_gamma({1.0}), std::runtime_error);
    }
}

TEST_CASE("ensemble fluctuation statistics") {
    std::vector<FidelityTrace> traces(2);
    traces[0].f = {1.0, 0.9};
    traces[1].f = {1.0, 0.8};
    const harness::FluctuationStats st = harness::fluctuation_stats(traces, 1);
    CHECK(st.mean == doctest::Approx(0.85));
    CHECK(st.stddev == doctest::Approx(0.05 * std::sqrt(2.0)));
    CHECK(st.ratio == doctest::Approx(0.05 * std::sqrt(2.0) / 0.15));

    CHECK_THROWS_AS(harness::fluctuation_stats(traces, 0), std::runtime_error);
    CHECK_THROWS_AS(harness::fluctuation_stats(traces, 2), std::invalid_argument);
    CHECK_THROWS_AS(harness::fluctuation_stats({traces[0]}, 1), std::invalid_argument);
}

TEST_CASE("a noiseless cell stays at unit fidelity") {
    const SweepCell cell = tiny_sawtooth_cell(0.0, 3, 6, 12);
    const SweepPoint pt = harness::run_cell(cell, 1);
    CHECK(pt.n1 == 12);
    CHECK(pt.n2 == 12);
    REQUIRE(pt.mean_f.size() == 7);
    for (double f : pt.mean_f) CHECK(std::abs(f - 1.0) < 1e-9);
    CHECK(pt.fit_ok);
    CHECK(std::abs(pt.gamma_fit) < 1e-12);  // rounding noise around zero
    for (std::size_t t = 1; t <= 6; ++t) CHECK(std::isnan(pt.ratio[t]));
    for (std::uint64_t w : pt.wrong_cum) CHECK(w == 0);
    CHECK(pt.final_f.size() == 3);
}

TEST_CASE("a noisy cell decays and the fit tracks the prediction's scale") {
    std::vector<FidelityTrace> traces;
    const SweepCell cell = tiny_sawtooth_cell(0.05, 24, 8, 5);
    const SweepPoint pt = harness::run_cell(cell, 1, &traces);
    CHECK(traces.size() == 24);
    for (const FidelityTrace& tr : traces) {
        REQUIRE(tr.f.size() == 9);
        CHECK(tr.f[0] == 1.0);
        CHECK(tr.wrong_measurements.empty());
    }
    CHECK(pt.mean_f[8] < 1.0);
    CHECK(pt.fit_ok);
    CHECK(pt.gamma_fit > 0.0);
    CHECK(pt.gamma_th > 0.0);
    CHECK(pt.gamma_se >= 0.0);
    // Small register, modest ensemble: only an order-of-magnitude statement.
    CHECK(pt.gamma_ratio > 0.2);
    CHECK(pt.gamma_ratio < 5.0);
}

TEST_CASE("ensembles are reproducible for any worker count") {
    const SweepCell cell = tiny_sawtooth_cell(0.01, 4, 5, 7);
    const SweepPoint a = harness::run_cell(cell, 1);
    const SweepPoint b = harness::run_cell(cell, 2);
    CHECK(harness::csv_string({a}) == harness::csv_string({b}));
    CHECK(a.mean_f == b.mean_f);
    CHECK(a.final_f == b.final_f);

    const SweepPoint c = harness::run_cell(tiny_sawtooth_cell(0.01, 4, 5, 8), 1);
    CHECK(a.mean_f != c.mean_f);  // the master seed matters
}

TEST_CASE("cell validation") {
    CHECK_THROWS_AS(harness::run_cell(tiny_sawtooth_cell(0.01, 1, 5, 0), 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(harness::run_cell(tiny_sawtooth_cell(0.01, 4, 0, 0), 1),
                    std::invalid_argument);
}

TEST_CASE("a sweep records a failing cell in-row and carries on") {
    std::vector<SweepCell> cells;
    cells.push_back(tiny_sawtooth_cell(0.01, 3, 5, 1));
    cells.push_back(tiny_sawtooth_cell(0.01, 1, 5, 1));  // too few realizations
    const std::vector<SweepPoint> points = harness::run_sweep(cells, 1);
    REQUIRE(points.size() == 2);
    CHECK(points[0].fit_ok);
    CHECK_FALSE(points[1].fit_ok);
    CHECK_FALSE(points[1].fit_error.empty());
    CHECK(points[1].mean_f.empty());
    CHECK(std::isnan(points[1].gamma_fit));

    const std::string csv = harness::csv_string(points);
    // Header plus one row per step of the healthy cell only.
    CHECK(count_char(csv, '\n') == 6);
}

TEST_CASE("CSV layout") {
    CHECK(std::string(harness::kCsvHeader) ==
          "map,n_q,epsilon,decomposition,seed,realizations,step,mean_f,std_f,ratio,"
          "gamma_fit,gamma_th,gamma_ratio,n1,n2,n_g,wrong_meas_count");
    const SweepPoint pt = harness::run_cell(tiny_sawtooth_cell(0.02, 3, 5, 3), 1);
    const std::string csv = harness::csv_string({pt});
    std::istringstream ss(csv);
    std::string line;
    std::size_t rows = 0;
    while (std::getline(ss, line)) {
        CHECK(count_char(line, ',') == 16);
        ++rows;
    }
    CHECK(rows == 6);
    CHECK(csv.rfind(harness::kCsvHeader, 0) == 0);
    // Step column of the first data row is 1.
    std::istringstream ss2(csv);
    std::getline(ss2, line);
    std::getline(ss2, line);
    CHECK(line.find("sawtooth,3,") == 0);
}

TEST_CASE("return probability of the forward-backward protocol") {
    MapConfig cfg;
    cfg.map = MapKind::Sawtooth;
    cfg.n_q = 3;
    const CompiledCircuit circuit = map_step_circuit(cfg, Decomposition::AncillaEager);

    SUBCASE("noiseless evolution returns exactly") {
        NoiseConfig noise;
        noise.epsilon = 0.0;
        noise.master_seed = 9;
        const harness::ReturnEstimate est =
            harness::forward_backward_probability(circuit, noise, 2, 4, 1);
        CHECK(est.realizations == 4);
        CHECK(est.mean > 1.0 - 1e-9);
        CHECK(est.std_error < 1e-9);
    }
    SUBCASE("noise leaks probability out of the return state") {
        NoiseConfig noise;
        noise.epsilon = 0.05;
        noise.master_seed = 9;
        const harness::ReturnEstimate est =
            harness::forward_backward_probability(circuit, noise, 2, 16, 1);
        CHECK(est.mean < 1.0);
        CHECK(est.mean > 0.5);
        CHECK(est.std_error > 0.0);
    }
    SUBCASE("validation") {
        NoiseConfig noise;
        noise.epsilon = 0.01;
        CHECK_THROWS_AS(harness::forward_backward_probability(circuit, noise, 0, 4, 1),
                        std::invalid_argument);
        CHECK_THROWS_AS(harness::forward_backward_probability(circuit, noise, 2, 1, 1),
                        std::invalid_argument);
        MapConfig dw;
        dw.map = MapKind::DoubleWell;
        dw.n_q = 4;
        const CompiledCircuit measured = map_step_circuit(dw, Decomposition::AncillaEager);
        CHECK_THROWS_AS(harness::forward_backward_probability(measured, noise, 2, 4, 1),
                        std::invalid_argument);
    }
}

TEST_CASE("worker resolution order") {
    CHECK(harness::resolve_workers(3) == 3);
    setenv("QMAPS_WORKERS", "2", 1);
    CHECK(harness::resolve_workers(0) == 2);
    CHECK(harness::resolve_workers(5) == 5);  // explicit request still wins
    setenv("QMAPS_WORKERS", "not-a-number", 1);
    CHECK(harness::resolve_workers(0) >= 1);  // falls through to hardware
    unsetenv("QMAPS_WORKERS");
    CHECK(harness::resolve_workers(0) >= 1);
}
