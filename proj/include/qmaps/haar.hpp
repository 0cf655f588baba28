#pragma once

#include <cstddef>
#include <vector>

#include "qmaps/rng.hpp"
#include "qmaps/statevector.hpp"

namespace qmaps {

// Averages of diagonal operators over Haar-random states.  For a diagonal
// unitary R with eigenphases lambda_j, writing I(R) = tr(R)/N:
//   first moment   <psi|R|psi>            averages to I(R)
//   second moment  |<psi|R|psi>|^2        averages to
//        I2(R) = 1 - A (1 - |tr R|^2 / N^2),   A = N/(1+N)
//   cross moment   |<psi|R|phi>|^2 over orthogonal Haar pairs averages to
//        J2(R) = (I(R R^dag) - I2(R)) / (N - 1)
// with small-spread forms I2 = 1 - A sigma_lambda^2 and
// J2 = N/(N^2-1) sigma_lambda^2.
namespace haar {

// Gaussian amplitudes, normalized: exactly Haar on the N-sphere.
std::vector<cx> sample_state(std::size_t N, RngStream& rng);

// Haar sample projected orthogonal to psi, renormalized (Haar on the
// orthogonal complement).  Throws std::runtime_error if the projection is
// degenerate (residual norm < 1e-12).
std::vector<cx> sample_orthogonal(const std::vector<cx>& psi, RngStream& rng);

struct MonteCarloEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
};

// 1 - A (1 - |tr R|^2 / N^2) for eigenphases lambda (exact, any spread).
double analytic_I2(const std::vector<double>& lambda);

// Exact closed form for a spectrum holding two distinct values with equal
// multiplicity: 1 - A sin^2((l1 - l2)/2).
double analytic_I2_two_level(std::size_t N, double l1, double l2);

// (1 - analytic_I2) / (N - 1): the orthogonal cross moment for unitary R.
double analytic_J2(const std::vector<double>& lambda);

// Monte Carlo of |<psi|R|psi>|^2 over n Haar samples.
MonteCarloEstimate mc_I2(const std::vector<double>& lambda, std::size_t n,
                         RngStream& rng);

// Monte Carlo of |<psi|R|phi>|^2 over orthogonal Haar pairs.
MonteCarloEstimate mc_J2(const std::vector<double>& lambda, std::size_t n,
                         RngStream& rng);

// Haar concentration of the probability in the lower half of the register:
// p = sum_{j < N/2} |psi_j|^2 has <p> = 1/2 and
// var(p) = 1/(4 (1 + N)) (exactly 1/12 at N = 2, the uniform law).
struct ConcentrationStats {
    double mean_p = 0.0;
    double var_p = 0.0;
    double se_mean = 0.0;
    double se_var = 0.0;  // from the sample fourth moment
    std::size_t samples = 0;
};

ConcentrationStats concentration(std::size_t N, std::size_t n, RngStream& rng);

double predicted_var_p(std::size_t N);

}  // namespace haar
}  // namespace qmaps
