// spectra.hpp — eigenvalues and c-normalized biorthogonal eigenvectors of the
// complex symmetric model matrices.
//
// For a complex symmetric M the left eigenvectors are the transposes of the
// right ones, so a single set {Phi_k} carries the full biorthogonal structure
// once it is normalized in the bilinear c-product: sum_m Phi_km^2 = 1.
// Two routes are provided: the closed-form 2x2 solution and a general dense
// path (characteristic polynomial -> simultaneous root iteration -> Newton
// polish -> inverse iteration). The pair doubles as a cross-check oracle.

#pragma once

#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "epsweep/model.hpp"

namespace epsweep {

// Defectiveness threshold on |<u*|u>| of the unit-normalized vector: below it
// the c-norm is treated as vanished (EP) and normalization is suppressed.
inline constexpr double kTauEp = 1e-8;
// Relative tolerance of the simultaneous root iteration.
inline constexpr double kTauRoot = 1e-13;
inline constexpr int kMaxRootIterations = 500;
// Eigenvalue pairs closer than this (times scale) are re-orthogonalized
// against each other in the c-product during extraction.
inline constexpr double kClusterWindow = 1e-6;

struct EigenState {
    Complex eigenvalue;            // E_k + i*Gamma_k/2
    std::vector<Complex> vector;   // c-normalized; unit Hermitian norm when !c_norm_ok
    bool c_norm_ok{true};
    double residual{0.0};          // max-norm of (M phi - lambda phi)

    double energy() const { return eigenvalue.real(); }
    double half_width() const { return eigenvalue.imag(); }
};

struct SpectralDecomposition {
    std::vector<EigenState> states;             // standalone order: ascending (Re, Im)
    std::vector<std::pair<int, int>> coalescent_pairs;

    int n() const { return static_cast<int>(states.size()); }
    bool any_flagged() const;
};

struct SolverError : std::runtime_error {
    double max_residual;
    SolverError(const std::string& what, double res)
        : std::runtime_error(what), max_residual(res) {}
};

// bilinear product sum_m a_m b_m (no conjugation)
Complex c_product(std::span<const Complex> a, std::span<const Complex> b);
// Hermitian product sum_m conj(a_m) b_m
Complex herm_product(std::span<const Complex> a, std::span<const Complex> b);
double herm_norm(std::span<const Complex> a);

// Z = (1/2) sqrt((eps1-eps2)^2 + 4 omega^2), principal branch; the two
// eigenvalues are mean(eps) +- Z.
Complex discriminant_z(const HamiltonianMatrix& m);

SpectralDecomposition eigen_2x2_analytic(const HamiltonianMatrix& m);
SpectralDecomposition eigen_general(const HamiltonianMatrix& m);

// analytic route for n == 2, general route otherwise
SpectralDecomposition decompose(const HamiltonianMatrix& m);

struct CNormResult {
    std::vector<Complex> vector;
    bool c_norm_ok{true};
    double unit_c_product{0.0};  // |<u*|u>| of the unit-normalized input
};

// Scale the vector so that sum_m v_m^2 = 1. The leftover +-1 freedom is fixed
// by maximizing Re<previous|v> when `previous` is given, else by making the
// largest-magnitude component positive (real part, then imaginary on ties).
// A vanishing c-product (|<u*|u>| <= kTauEp) flags the vector coalescent and
// returns it unit-Hermitian-normalized instead.
CNormResult c_normalize(std::vector<Complex> v,
                        const std::vector<Complex>* previous = nullptr);

// monic characteristic polynomial coefficients of det(z I - M):
// z^n + c[0] z^{n-1} + ... + c[n-1]   (Faddeev-LeVerrier)
std::vector<Complex> characteristic_polynomial(const HamiltonianMatrix& m);

}  // namespace epsweep
