#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace qmaps {

using cx = std::complex<double>;
using Mat2 = std::array<cx, 4>;  // row-major 2x2

// Dense state vector over n qubits, little-endian: qubit j contributes 2^j to
// the basis label, so |b_{n-1} ... b_1 b_0> has label sum b_j 2^j.
class StateVector {
public:
    struct unchecked_t {};
    static constexpr unchecked_t unchecked{};

    // |label> on n qubits.
    static StateVector basis_state(int n_qubits, std::uint64_t label);

    // Takes ownership of amplitudes; enforces normalization within 1e-10.
    StateVector(int n_qubits, std::vector<cx> amplitudes);

    // Same, but skips the norm check (perturbed or intermediate states).
    StateVector(int n_qubits, std::vector<cx> amplitudes, unchecked_t);

    int n_qubits() const { return n_qubits_; }
    std::size_t dim() const { return amp_.size(); }
    const std::vector<cx>& amplitudes() const { return amp_; }
    std::vector<cx>& amplitudes() { return amp_; }

    double norm_sq() const;
    // Throws if |norm^2 - 1| exceeds tol.
    void assert_normalized(double tol = 1e-10) const;

    // Applies an arbitrary 2x2 unitary to qubit q.  Throws std::invalid_argument
    // if q is out of range or m deviates from unitarity by more than 1e-12.
    void apply_1q(int q, const Mat2& m);

    void apply_hadamard(int q);
    // diag(1, e^{i phi}) on qubit q.
    void apply_phase(int q, double phi);
    // diag(1,1,1,e^{i phi}) on the pair (q1, q2); symmetric in its arguments.
    void apply_controlled_phase(int q1, int q2, double phi);
    // Bit flip (Pauli X) on qubit q.
    void apply_x(int q);

    // |<this|other>|^2; requires equal qubit counts.
    double fidelity(const StateVector& other) const;
    cx inner(const StateVector& other) const;

    // Projective measurement of qubit q in the computational basis.  u in
    // [0, 1) selects the branch: outcome 0 iff u < p0.  Collapses onto the
    // outcome branch and renormalizes.  Throws std::runtime_error if the
    // selected branch has probability below 1e-15 (degenerate collapse).
    int measure_qubit(int q, double u);

    // Measures q and flips it back to |0> if the outcome was 1.
    // Returns true when the outcome was 1 (a "wrong" reset for a wire that
    // should have been clean).
    bool reset_qubit_to_zero(int q, double u);

private:
    void check_qubit(int q) const;

    int n_qubits_;
    std::vector<cx> amp_;
};

}  // namespace qmaps
