#include "qmaps/haar.hpp"

#include <cmath>
#include <stdexcept>

namespace qmaps::haar {

namespace {

double spectrum_N(const std::vector<double>& lambda) {
    if (lambda.empty())
        throw std::invalid_argument("haar: empty spectrum");
    return static_cast<double>(lambda.size());
}

cx trace_of(const std::vector<double>& lambda) {
    cx t(0.0, 0.0);
    for (double l : lambda) t += std::polar(1.0, l);
    return t;
}

MonteCarloEstimate finalize(double sum, double sum_sq, std::size_t n) {
    MonteCarloEstimate e;
    e.samples = n;
    e.mean = sum / static_cast<double>(n);
    const double var =
        (sum_sq - sum * sum / static_cast<double>(n)) / static_cast<double>(n - 1);
    e.std_error = std::sqrt(var / static_cast<double>(n));
    return e;
}

}  // namespace

std::vector<cx> sample_state(std::size_t N, RngStream& rng) {
    if (N == 0) throw std::invalid_argument("sample_state: N must be positive");
    std::vector<cx> psi(N);
    double norm_sq = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
        double re, im;
        rng.next_gaussian_pair(re, im);
        psi[j] = cx(re, im);
        norm_sq += re * re + im * im;
    }
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (cx& a : psi) a *= inv;
    return psi;
}

std::vector<cx> sample_orthogonal(const std::vector<cx>& psi, RngStream& rng) {
    std::vector<cx> phi = sample_state(psi.size(), rng);
    cx overlap(0.0, 0.0);
    for (std::size_t j = 0; j < psi.size(); ++j) overlap += std::conj(psi[j]) * phi[j];
    double norm_sq = 0.0;
    for (std::size_t j = 0; j < psi.size(); ++j) {
        phi[j] -= overlap * psi[j];
        norm_sq += std::norm(phi[j]);
    }
    if (norm_sq < 1e-24)
        throw std::runtime_error("sample_orthogonal: degenerate projection");
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (cx& a : phi) a *= inv;
    return phi;
}

double analytic_I2(const std::vector<double>& lambda) {
    const double N = spectrum_N(lambda);
    const double A = N / (1.0 + N);
    return 1.0 - A * (1.0 - std::norm(trace_of(lambda)) / (N * N));
}

double analytic_I2_two_level(std::size_t N, double l1, double l2) {
    const double Nd = static_cast<double>(N);
    const double A = Nd / (1.0 + Nd);
    const double s = std::sin(0.5 * (l1 - l2));
    return 1.0 - A * s * s;
}

double analytic_J2(const std::vector<double>& lambda) {
    const double N = spectrum_N(lambda);
    if (lambda.size() < 2)
        throw std::invalid_argument("analytic_J2: needs N >= 2");
    return (1.0 - analytic_I2(lambda)) / (N - 1.0);
}

MonteCarloEstimate mc_I2(const std::vector<double>& lambda, std::size_t n,
                         RngStream& rng) {
    if (n < 2) throw std::invalid_argument("mc_I2: need at least 2 samples");
    const std::size_t N = lambda.size();
    std::vector<cx> eig(N);
    for (std::size_t j = 0; j < N; ++j) eig[j] = std::polar(1.0, lambda[j]);
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
        const std::vector<cx> psi = sample_state(N, rng);
        cx amp(0.0, 0.0);
        for (std::size_t j = 0; j < N; ++j) amp += eig[j] * std::norm(psi[j]);
        const double v = std::norm(amp);
        sum += v;
        sum_sq += v * v;
    }
    return finalize(sum, sum_sq, n);
}

MonteCarloEstimate mc_J2(const std::vector<double>& lambda, std::size_t n,
                         RngStream& rng) {
    if (n < 2) throw std::invalid_argument("mc_J2: need at least 2 samples");
    const std::size_t N = lambda.size();
    if (N < 2) throw std::invalid_argument("mc_J2: needs N >= 2");
    std::vector<cx> eig(N);
    for (std::size_t j = 0; j < N; ++j) eig[j] = std::polar(1.0, lambda[j]);
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
        const std::vector<cx> psi = sample_state(N, rng);
        const std::vector<cx> phi = sample_orthogonal(psi, rng);
        cx amp(0.0, 0.0);
        for (std::size_t j = 0; j < N; ++j) amp += eig[j] * std::conj(psi[j]) * phi[j];
        const double v = std::norm(amp);
        sum += v;
        sum_sq += v * v;
    }
    return finalize(sum, sum_sq, n);
}

ConcentrationStats concentration(std::size_t N, std::size_t n, RngStream& rng) {
    if (N < 2 || N % 2 != 0)
        throw std::invalid_argument("concentration: N must be even and >= 2");
    if (n < 2) throw std::invalid_argument("concentration: need at least 2 samples");
    std::vector<double> p(n);
    double sum = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
        const std::vector<cx> psi = sample_state(N, rng);
        double ps = 0.0;
        for (std::size_t j = 0; j < N / 2; ++j) ps += std::norm(psi[j]);
        p[s] = ps;
        sum += ps;
    }
    const double nd = static_cast<double>(n);
    const double mean = sum / nd;
    double m2 = 0.0, m4 = 0.0;
    for (double ps : p) {
        const double d = ps - mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    ConcentrationStats st;
    st.samples = n;
    st.mean_p = mean;
    st.var_p = m2 / (nd - 1.0);
    st.se_mean = std::sqrt(st.var_p / nd);
    // Var(s^2) ~ (mu4 - sigma^4) / n
    const double mu4 = m4 / nd;
    const double sig4 = st.var_p * st.var_p;
    st.se_var = std::sqrt(std::max(mu4 - sig4, 0.0) / nd);
    return st;
}

double predicted_var_p(std::size_t N) {
    return 1.0 / (4.0 * (1.0 + static_cast<double>(N)));
}

}  // namespace qmaps::haar
