#include "qmaps/statevector.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qmaps {

namespace {

bool is_unitary_2x2(const Mat2& m, double tol) {
    // Columns orthonormal: m^dagger m = I.
    cx c00 = std::conj(m[0]) * m[0] + std::conj(m[2]) * m[2];
    cx c11 = std::conj(m[1]) * m[1] + std::conj(m[3]) * m[3];
    cx c01 = std::conj(m[0]) * m[1] + std::conj(m[2]) * m[3];
    return std::abs(c00 - 1.0) <= tol && std::abs(c11 - 1.0) <= tol &&
           std::abs(c01) <= tol;
}

}  // namespace

StateVector StateVector::basis_state(int n_qubits, std::uint64_t label) {
    if (n_qubits < 0 || n_qubits >= 48)
        throw std::invalid_argument("basis_state: qubit count out of range");
    std::uint64_t dim = 1ull << n_qubits;
    if (label >= dim)
        throw std::invalid_argument("basis_state: label exceeds 2^n - 1");
    std::vector<cx> a(dim, cx(0.0, 0.0));
    a[label] = 1.0;
    return StateVector(n_qubits, std::move(a), unchecked);
}

StateVector::StateVector(int n_qubits, std::vector<cx> amplitudes)
    : StateVector(n_qubits, std::move(amplitudes), unchecked) {
    assert_normalized();
}

StateVector::StateVector(int n_qubits, std::vector<cx> amplitudes, unchecked_t)
    : n_qubits_(n_qubits), amp_(std::move(amplitudes)) {
    if (n_qubits < 0 || n_qubits >= 48)
        throw std::invalid_argument("StateVector: qubit count out of range");
    if (amp_.size() != (std::size_t{1} << n_qubits))
        throw std::invalid_argument("StateVector: amplitude count is not 2^n");
}

double StateVector::norm_sq() const {
    double s = 0.0;
    for (const cx& a : amp_) s += std::norm(a);
    return s;
}

void StateVector::assert_normalized(double tol) const {
    if (std::abs(norm_sq() - 1.0) > tol)
        throw std::runtime_error("StateVector: norm drifted from 1 by more than " +
                                 std::to_string(tol));
}

void StateVector::check_qubit(int q) const {
    if (q < 0 || q >= n_qubits_)
        throw std::invalid_argument("qubit index out of range");
}

void StateVector::apply_1q(int q, const Mat2& m) {
    check_qubit(q);
    if (!is_unitary_2x2(m, 1e-12))
        throw std::invalid_argument("apply_1q: matrix is not unitary within 1e-12");
    const std::size_t mask = std::size_t{1} << q;
    const std::size_t lo_mask = mask - 1;
    const std::size_t hi_mask = ~lo_mask;
    const std::size_t pairs = amp_.size() >> 1;
    for (std::size_t i = 0; i < pairs; ++i) {
        const std::size_t i0 = ((i & hi_mask) << 1) | (i & lo_mask);
        const std::size_t i1 = i0 | mask;
        const cx a0 = amp_[i0];
        const cx a1 = amp_[i1];
        amp_[i0] = m[0] * a0 + m[1] * a1;
        amp_[i1] = m[2] * a0 + m[3] * a1;
    }
}

void StateVector::apply_hadamard(int q) {
    check_qubit(q);
    constexpr double inv_sqrt2 = 0.70710678118654752440;
    const std::size_t mask = std::size_t{1} << q;
    const std::size_t lo_mask = mask - 1;
    const std::size_t hi_mask = ~lo_mask;
    const std::size_t pairs = amp_.size() >> 1;
    for (std::size_t i = 0; i < pairs; ++i) {
        const std::size_t i0 = ((i & hi_mask) << 1) | (i & lo_mask);
        const std::size_t i1 = i0 | mask;
        const cx a0 = amp_[i0];
        const cx a1 = amp_[i1];
        amp_[i0] = inv_sqrt2 * (a0 + a1);
        amp_[i1] = inv_sqrt2 * (a0 - a1);
    }
}

void StateVector::apply_phase(int q, double phi) {
    check_qubit(q);
    const cx w = std::polar(1.0, phi);
    const std::size_t mask = std::size_t{1} << q;
    for (std::size_t i = 0; i < amp_.size(); ++i)
        if (i & mask) amp_[i] *= w;
}

void StateVector::apply_controlled_phase(int q1, int q2, double phi) {
    check_qubit(q1);
    check_qubit(q2);
    if (q1 == q2)
        throw std::invalid_argument("apply_controlled_phase: wires must differ");
    const cx w = std::polar(1.0, phi);
    const std::size_t mask = (std::size_t{1} << q1) | (std::size_t{1} << q2);
    for (std::size_t i = 0; i < amp_.size(); ++i)
        if ((i & mask) == mask) amp_[i] *= w;
}

void StateVector::apply_x(int q) {
    check_qubit(q);
    const std::size_t mask = std::size_t{1} << q;
    const std::size_t lo_mask = mask - 1;
    const std::size_t hi_mask = ~lo_mask;
    const std::size_t pairs = amp_.size() >> 1;
    for (std::size_t i = 0; i < pairs; ++i) {
        const std::size_t i0 = ((i & hi_mask) << 1) | (i & lo_mask);
        std::swap(amp_[i0], amp_[i0 | mask]);
    }
}

cx StateVector::inner(const StateVector& other) const {
    if (other.n_qubits_ != n_qubits_)
        throw std::invalid_argument("inner: qubit counts differ");
    cx s(0.0, 0.0);
    for (std::size_t i = 0; i < amp_.size(); ++i)
        s += std::conj(amp_[i]) * other.amp_[i];
    return s;
}

double StateVector::fidelity(const StateVector& other) const {
    return std::norm(inner(other));
}

int StateVector::measure_qubit(int q, double u) {
    check_qubit(q);
    if (u < 0.0 || u >= 1.0)
        throw std::invalid_argument("measure_qubit: u must lie in [0, 1)");
    const std::size_t mask = std::size_t{1} << q;
    double p0 = 0.0, p1 = 0.0;
    for (std::size_t i = 0; i < amp_.size(); ++i) {
        if (i & mask)
            p1 += std::norm(amp_[i]);
        else
            p0 += std::norm(amp_[i]);
    }
    const int outcome = (u < p0) ? 0 : 1;
    const double p_branch = outcome ? p1 : p0;
    if (p_branch < 1e-15)
        throw std::runtime_error("measure_qubit: collapse onto branch with probability < 1e-15");
    const double scale = 1.0 / std::sqrt(p_branch);
    for (std::size_t i = 0; i < amp_.size(); ++i) {
        if (((i & mask) != 0) == (outcome == 1))
            amp_[i] *= scale;
        else
            amp_[i] = cx(0.0, 0.0);
    }
    return outcome;
}

bool StateVector::reset_qubit_to_zero(int q, double u) {
    const int outcome = measure_qubit(q, u);
    if (outcome == 1) apply_x(q);
    return outcome == 1;
}

}  // namespace qmaps
