// observables.hpp — biorthogonality observables of a spectral decomposition:
// phase rigidity r_k = <Phi_k*|Phi_k>/<Phi_k|Phi_k> = 1/A_k, the norm
// A_k = <Phi_k|Phi_k> >= 1, pairwise Hermitian overlaps |B_i^j|, the mixing
// magnitudes |b_kl| (components in the unperturbed unit basis), and a
// collinearity diagnostic that approaches 1 when two eigenvectors coalesce.

#pragma once

#include <vector>

#include "epsweep/spectra.hpp"

namespace epsweep {

using RealMatrix = std::vector<std::vector<double>>;

struct ObservableRecord {
    std::vector<double> r;               // in [0,1]; exactly 0 for flagged states
    std::vector<double> A;               // >= 1; +inf sentinel for flagged states
    std::vector<double> unit_c_product;  // raw |<u*|u>| per state (diagnostic)
    std::vector<bool> flagged;           // coalescent states (c-norm suppressed)
    RealMatrix B_abs;                    // |<Phi_i|Phi_j>|, diagonal unused (0)
    RealMatrix b_abs;                    // b_abs[k][l] = |Phi_k,l|
    RealMatrix collinearity;             // in [0,1], diagonal 1
};

// All observables from one decomposition in a single pass; r and A share the
// same intermediate so r*A = 1 holds exactly for unflagged states.
ObservableRecord observe(const SpectralDecomposition& dec);

std::vector<double> phase_rigidity(const SpectralDecomposition& dec);
std::vector<double> norm_a(const SpectralDecomposition& dec);
RealMatrix overlaps_b(const SpectralDecomposition& dec);
RealMatrix mixing_coeffs(const SpectralDecomposition& dec);
RealMatrix ep_proximity(const SpectralDecomposition& dec);

}  // namespace epsweep
