// eplocate.hpp — locating and classifying eigenvalue degeneracies along affine
// parameter paths.
//
// For n = 2 the coalescence condition Z = 0 is solved exactly: with affine
// curves, 4Z^2(a) = ((e1-e2) + i(g1-g2))^2 + 4 omega^2 is a complex quadratic
// in a, so every EP of the two-level families has a closed-form location.
// For n > 2 a completed sweep is scanned for gap/rigidity minima and each
// candidate bracket is refined by golden-section minimization of the gap.

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "epsweep/model.hpp"
#include "epsweep/spectra.hpp"

namespace epsweep {

struct SweepResult;  // sweep.hpp

enum class EpKind { ExactRoot, NearMissMinimum };
enum class Degeneracy { Exceptional, Diabolic, Avoided, Ambiguous };

std::string to_string(EpKind k);
std::string to_string(Degeneracy d);

struct EpLocation {
    double a_star{0.0};
    EpKind kind{EpKind::ExactRoot};
    std::pair<int, int> pair{0, 1};   // 0-based state indices
    double min_gap{0.0};              // |E_i - E_j| at a_star
    double r_at{0.0};                 // min rigidity of the pair at a_star
    Degeneracy degeneracy{Degeneracy::Exceptional};
    double imag_distance{0.0};        // |Im root| for near-miss roots
    bool non_unimodal{false};         // refine_ep bracket held several minima
};

struct RealSpectrumWindow {
    double lo{0.0};
    double hi{0.0};
};

struct EpReport {
    std::vector<EpLocation> locations;  // ascending a_star
    std::vector<RealSpectrumWindow> real_spectrum_windows;
    std::vector<double> diabolic_crossings;  // exact degeneracies with orthogonal vectors
    bool degenerate_line{false};             // 4Z^2 identically zero
};

// Exact two-level EP conditions. Real roots of 4Z^2(a) = 0 become exact-root
// locations (diabolic ones are split out); complex roots with small imaginary
// part are reported as near-miss minima at their real part.
EpReport analytic_ep_two_level(const HamiltonianSpec& spec);

struct EpCandidate {
    double a_center{0.0};
    double bracket_lo{0.0};
    double bracket_hi{0.0};
    double min_gap{0.0};
    double min_r{1.0};
    std::pair<int, int> pair{0, 1};
};

// Local minima of the per-row pairwise gap (below 0.1 x median gap) and of
// min_k r_k (below 0.5) over a completed sweep, merged into bracketed
// candidates. An empty list is a valid result.
std::vector<EpCandidate> scan_minima(const SweepResult& sweep);

// Golden-section minimization of the pairwise gap inside [lo, hi] down to
// width 1e-12; kind decided by the final gap against 1e-8 * matrix scale.
EpLocation refine_ep(const HamiltonianSpec& spec, double lo, double hi);

struct Classification {
    Degeneracy kind{Degeneracy::Avoided};
    double gap{0.0};
    double collinearity{0.0};
    std::pair<int, int> pair{0, 1};
};

// gap < tol with collinear vectors -> exceptional; gap < tol with orthogonal
// vectors -> diabolic; otherwise avoided (ambiguous in between).
Classification classify(const HamiltonianSpec& spec, double a_star);

// Dispatch: analytic conditions for n = 2, sweep scan + refinement otherwise.
EpReport locate_eps(const HamiltonianSpec& spec, const SweepAxis& axis);

void write_ep_report_doc(std::ostream& os, const EpReport& report,
                         const std::string& axis_name, const std::string& model_id);

}  // namespace epsweep
