#include "qmaps/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace qmaps::oracle {

namespace {
constexpr double pi = 3.14159265358979323846264338327950288;
constexpr double two_pi = 2.0 * pi;
}  // namespace

CMat CMat::zero(std::size_t n) {
    CMat m;
    m.n = n;
    m.a.assign(n * n, cx(0.0, 0.0));
    return m;
}

CMat CMat::identity(std::size_t n) {
    CMat m = zero(n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

CMat CMat::diagonal(const std::vector<cx>& d) {
    CMat m = zero(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m.at(i, i) = d[i];
    return m;
}

CMat CMat::mul(const CMat& o) const {
    if (o.n != n) throw std::invalid_argument("CMat::mul: size mismatch");
    CMat r = zero(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const cx v = at(i, k);
            if (v == cx(0.0, 0.0)) continue;
            for (std::size_t j = 0; j < n; ++j) r.at(i, j) += v * o.at(k, j);
        }
    return r;
}

CMat CMat::adjoint() const {
    CMat r = zero(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) r.at(i, j) = std::conj(at(j, i));
    return r;
}

CMat dft_matrix(std::size_t N) {
    CMat f = CMat::zero(N);
    const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(N));
    for (std::size_t m = 0; m < N; ++m)
        for (std::size_t j = 0; j < N; ++j) {
            // Exponent reduced mod N before the trig call to keep the angle small.
            const double ph = two_pi * static_cast<double>((m * j) % N) /
                              static_cast<double>(N);
            f.at(m, j) = std::polar(inv_sqrt, ph);
        }
    return f;
}

CMat bit_reversal_matrix(int n_q) {
    const std::size_t N = std::size_t{1} << n_q;
    CMat b = CMat::zero(N);
    for (std::size_t x = 0; x < N; ++x) {
        std::size_t r = 0;
        for (int i = 0; i < n_q; ++i)
            if (x & (std::size_t{1} << i)) r |= std::size_t{1} << (n_q - 1 - i);
        b.at(r, x) = 1.0;
    }
    return b;
}

CMat floquet_operator(const MapConfig& cfg) {
    const std::size_t N = cfg.N();
    const double Nd = static_cast<double>(N);
    const double delta = cfg.delta_theta();

    // Kick: phase -(K N / 2 pi L) V(theta_j), V(theta_j) = (2 pi / N)^p P(j + delta).
    std::vector<cx> kick(N);
    const double k_over_h = cfg.K * Nd / (two_pi * static_cast<double>(cfg.L));
    for (std::size_t j = 0; j < N; ++j) {
        const double y = static_cast<double>(j) + delta;
        double P = 0.0;
        int p = 2;
        switch (cfg.map) {
            case MapKind::Sawtooth:
                P = -0.5 * y * y;
                p = 2;
                break;
            case MapKind::DoubleWell: {
                const double u = y * y - cfg.a * cfg.a;
                P = u * u;
                p = 4;
                break;
            }
        }
        const double V = std::pow(two_pi / Nd, p) * P;
        kick[j] = std::polar(1.0, -k_over_h * V);
    }

    // Free rotation in the momentum basis: phase -pi L j^2 / N.
    std::vector<cx> rot(N);
    for (std::size_t j = 0; j < N; ++j) {
        const double jd = static_cast<double>(j);
        rot[j] = std::polar(1.0, -pi * static_cast<double>(cfg.L) * jd * jd / Nd);
    }

    const CMat F = dft_matrix(N);
    return F.mul(CMat::diagonal(rot)).mul(F.adjoint()).mul(CMat::diagonal(kick));
}

CMat circuit_unitary(const std::vector<Gate>& gates, int n_wires) {
    const std::size_t N = std::size_t{1} << n_wires;
    CMat u = CMat::zero(N);
    for (std::size_t col = 0; col < N; ++col) {
        StateVector psi = StateVector::basis_state(n_wires, col);
        for (const Gate& g : gates) {
            if (g.kind == GateKind::MeasureReset)
                throw std::invalid_argument("circuit_unitary: circuit contains a measurement");
            apply_gate(psi, g);
        }
        for (std::size_t row = 0; row < N; ++row) u.at(row, col) = psi.amplitudes()[row];
    }
    return u;
}

CMat restrict_to_ancilla_zero(const CMat& u, int n_system, double* leak) {
    const std::size_t Ns = std::size_t{1} << n_system;
    if (u.n != (Ns << 1))
        throw std::invalid_argument("restrict_to_ancilla_zero: size mismatch");
    CMat r = CMat::zero(Ns);
    double worst = 0.0;
    for (std::size_t col = 0; col < Ns; ++col) {
        for (std::size_t row = 0; row < Ns; ++row) {
            r.at(row, col) = u.at(row, col);
            worst = std::max(worst, std::abs(u.at(row + Ns, col)));
        }
    }
    if (leak) *leak = worst;
    return r;
}

double max_deviation_up_to_phase(const CMat& u, const CMat& v) {
    if (u.n != v.n) throw std::invalid_argument("max_deviation: size mismatch");
    // Align on v's largest entry.
    std::size_t best = 0;
    double best_mag = -1.0;
    for (std::size_t i = 0; i < v.a.size(); ++i) {
        if (std::abs(v.a[i]) > best_mag) {
            best_mag = std::abs(v.a[i]);
            best = i;
        }
    }
    if (best_mag <= 0.0 || std::abs(u.a[best]) == 0.0)
        throw std::invalid_argument("max_deviation: cannot align a zero matrix");
    const cx phase = (u.a[best] / std::abs(u.a[best])) /
                     (v.a[best] / std::abs(v.a[best]));
    double worst = 0.0;
    for (std::size_t i = 0; i < u.a.size(); ++i)
        worst = std::max(worst, std::abs(u.a[i] - phase * v.a[i]));
    return worst;
}

double max_deviation(const CMat& u, const CMat& v) {
    if (u.n != v.n) throw std::invalid_argument("max_deviation: size mismatch");
    double worst = 0.0;
    for (std::size_t i = 0; i < u.a.size(); ++i)
        worst = std::max(worst, std::abs(u.a[i] - v.a[i]));
    return worst;
}

}  // namespace qmaps::oracle
