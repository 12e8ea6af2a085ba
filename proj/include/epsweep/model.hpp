// model.hpp — parameterized non-Hermitian Hamiltonian families and figure presets.
//
// A model is a set of n affine trajectories for the level energies e_i(a) and
// half-widths g_i(a) = gamma_i(a)/2, plus one complex coupling omega shared by
// all coupled pairs. Evaluating at a sweep-parameter value a yields the complex
// symmetric matrix with diagonal e_i(a) + i*g_i(a) and omega placed according
// to the topology (dense 2x2, or doorway: row/column 1 only).

#pragma once

#include <complex>
#include <string>
#include <vector>

namespace epsweep {

using Complex = std::complex<double>;

// Affine map from the sweep parameter to a real quantity: value(a) = intercept + slope*a.
struct ParamCurve {
    double intercept{0.0};
    double slope{0.0};

    double value(double a) const { return intercept + slope * a; }
    bool is_constant() const { return slope == 0.0; }
};

enum class Topology { FullTwoLevel, Doorway };

std::string to_string(Topology t);
Topology topology_from_string(const std::string& s);

// n-state family. Invariants: n >= 2; FullTwoLevel requires n == 2;
// all curve coefficients and omega finite.
struct HamiltonianSpec {
    int n{0};
    std::vector<ParamCurve> energy;     // e_i(a)
    std::vector<ParamCurve> halfwidth;  // gamma_i(a)/2
    Complex omega{0.0, 0.0};
    Topology topology{Topology::FullTwoLevel};
};

// Concrete complex symmetric matrix at one parameter value.
class HamiltonianMatrix {
public:
    HamiltonianMatrix() = default;
    explicit HamiltonianMatrix(int n) : n_(n), a_(static_cast<size_t>(n) * n, Complex{0.0, 0.0}) {}

    int n() const { return n_; }
    Complex& operator()(int i, int j) { return a_[static_cast<size_t>(i) * n_ + j]; }
    const Complex& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * n_ + j]; }

    // assigns (i,j) and (j,i) from the same value, keeping M = M^T bitwise
    void set_sym(int i, int j, Complex v) {
        (*this)(i, j) = v;
        (*this)(j, i) = v;
    }

    Complex trace() const;
    double max_abs() const;

private:
    int n_{0};
    std::vector<Complex> a_;
};

HamiltonianSpec build_two_level(ParamCurve e1, ParamCurve e2,
                                ParamCurve g1, ParamCurve g2, Complex omega);

// Doorway family: omega couples state 1 to every other state; all remaining
// off-diagonal entries are exactly zero.
HamiltonianSpec build_n_level(std::vector<ParamCurve> energies,
                              std::vector<ParamCurve> halfwidths, Complex omega);

HamiltonianMatrix eval_at(const HamiltonianSpec& spec, double a);

struct SweepAxis {
    std::string name{"a"};
    double min{0.0};
    double max{1.0};
    int points{1001};
};

struct Preset {
    std::string id;
    std::string note;
    HamiltonianSpec spec;
    SweepAxis axis;
};

const std::vector<Preset>& preset_catalog();
std::vector<std::string> preset_ids();

// throws std::invalid_argument listing the valid ids on an unknown id
const Preset& preset(const std::string& id);

}  // namespace epsweep
