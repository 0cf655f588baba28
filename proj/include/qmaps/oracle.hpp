#pragma once

#include <cstddef>
#include <vector>

#include "qmaps/mapcircuits.hpp"
#include "qmaps/statevector.hpp"

namespace qmaps {

// Dense cross-checks built straight from the defining formulas, kept
// independent of the circuit compiler so the two can disagree.
// Sizes stay tiny (N <= 2^7), so a plain row-major complex matrix is enough.
namespace oracle {

struct CMat {
    std::size_t n = 0;
    std::vector<cx> a;  // row-major n*n

    static CMat zero(std::size_t n);
    static CMat identity(std::size_t n);
    static CMat diagonal(const std::vector<cx>& d);

    cx& at(std::size_t r, std::size_t c) { return a[r * n + c]; }
    const cx& at(std::size_t r, std::size_t c) const { return a[r * n + c]; }

    CMat mul(const CMat& o) const;
    CMat adjoint() const;
};

// F[m][j] = exp(2 pi i j m / N) / sqrt(N).
CMat dft_matrix(std::size_t N);

// Permutation matrix of j -> bit-reverse(j) on n_q bits.
CMat bit_reversal_matrix(int n_q);

// One kick period built directly from the map definition (dense diagonal
// kick and free rotation conjugated by the DFT; the kick potential is
// evaluated from its defining polynomial, not from its expansion):
//   U = F . diag(exp(-i pi L j^2 / N)) . F^dag . diag(exp(-i (K N / 2 pi L) V(theta_j)))
CMat floquet_operator(const MapConfig& cfg);

// Unitary realized by a gate list on n_wires, built by running the simulator
// on every basis column.  Throws if the list contains a measurement.
CMat circuit_unitary(const std::vector<Gate>& gates, int n_wires);

// Restriction of a (system + ancilla) unitary to the ancilla-|0> block:
// rows/columns with ancilla bit 0.  The leak parameter receives the largest
// magnitude found in the off-block columns (how much the circuit couples out
// of the subspace).
CMat restrict_to_ancilla_zero(const CMat& u, int n_system, double* leak);

// max |u - e^{i alpha} v| over entries, alpha chosen to align the largest
// entry of v.
double max_deviation_up_to_phase(const CMat& u, const CMat& v);

// max |u - v| without phase alignment.
double max_deviation(const CMat& u, const CMat& v);

}  // namespace oracle
}  // namespace qmaps
