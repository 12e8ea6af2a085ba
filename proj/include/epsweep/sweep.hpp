// sweep.hpp — parameter sweeps with adaptive refinement near gap minima and
// eigenstate identity tracking across steps.
//
// State identity is tracked by eigenvector overlap, not by eigenvalue order:
// eigenvalues collide at EPs while vector overlap degrades more gracefully.
// Rows whose best matching overlap collapses get a discontinuity flag.

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "epsweep/eplocate.hpp"
#include "epsweep/model.hpp"
#include "epsweep/observables.hpp"
#include "epsweep/spectra.hpp"

namespace epsweep {

struct RefineOptions {
    bool enable{true};
    double gap_threshold{0.0};  // 0 -> automatic (from median eigenvalue motion/gap)
    int max_extra_points{500};
};

struct ColumnSelection {
    bool eigenvalues{true};  // E_k, G2_k
    bool rigidity{true};     // r_k, 1-r_k, A_k
    bool overlaps{true};     // B_ij
    bool mixing{true};       // b_kl
};

struct SweepConfig {
    HamiltonianSpec spec;
    SweepAxis axis;
    RefineOptions refine;
    ColumnSelection outputs;
};

struct SweepRow {
    double a{0.0};
    SpectralDecomposition dec;  // tracked order
    ObservableRecord obs;
    double min_gap{0.0};        // min pairwise |E_i - E_j|
    bool solver_failed{false};
    bool discontinuity{false};
    bool refined{false};        // inserted by refinement
};

struct SweepResult {
    SweepConfig config;
    std::vector<SweepRow> rows;  // strictly ascending in a
    EpReport ep_report;
    std::optional<double> max_bifurcation_at;
    int failed_rows{0};
    double gap_threshold_used{0.0};
    int refined_inserted{0};
};

// Uniform grid + bisection refinement near gap minima; observables attached
// per row; identity-tracked columns; EP scan attached. Throws SolverError if
// more than 5% of rows fail to decompose.
SweepResult run_sweep(const SweepConfig& config);

// Permutation sigma with cur.states[sigma[k]] continuing prev.states[k],
// chosen to maximize the summed unit-vector overlap |<u_prev*|u_cur>| over
// all assignments (exact for the small n used here). Any matched overlap
// below 0.2 sets *discontinuity.
std::vector<int> track_states(const SpectralDecomposition& prev,
                              const SpectralDecomposition& cur,
                              bool* discontinuity = nullptr);

// Parameter of maximal interior spread of the tracked widths (bifurcation
// presets) or energies (level-repulsion presets); absent when neither spread
// has an interior maximum (flat or boundary-dominated, e.g. omega = 0).
std::optional<double> max_width_bifurcation(const SweepResult& result);

// CSV: axis, E_1..E_n, G2_1..G2_n, r_1..r_n, one_minus_r_1.., A_1..,
// B_12.., b_11..b_nn, flags; 17-significant-digit decimals, locale-free.
void write_csv(std::ostream& os, const SweepResult& result);

// Key-value sidecar: model, grid, thresholds, EP report. The timestamp field
// is informational only and must be ignored when diffing runs.
void write_manifest(std::ostream& os, const SweepResult& result,
                    const std::string& model_id, bool include_timestamp = true);

std::string format_double(double v);  // shared %.17g formatting

}  // namespace epsweep
