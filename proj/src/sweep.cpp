#include "epsweep/sweep.hpp"

#include <algorithm>
#include <cfloat>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <limits>
#include <ostream>
#include <sstream>

#include "epsweep/config.hpp"

namespace epsweep {

namespace {

constexpr double kOverlapFlagThreshold = 0.2;

double min_pairwise_gap(const SpectralDecomposition& dec) {
    double g = std::numeric_limits<double>::infinity();
    for (int i = 0; i < dec.n(); ++i)
        for (int j = i + 1; j < dec.n(); ++j)
            g = std::min(g, std::abs(dec.states[i].eigenvalue - dec.states[j].eigenvalue));
    return g;
}

std::vector<std::vector<Complex>> unit_vectors(const SpectralDecomposition& dec) {
    std::vector<std::vector<Complex>> u;
    u.reserve(dec.states.size());
    for (const auto& st : dec.states) {
        std::vector<Complex> v = st.vector;
        const double nrm = herm_norm(v);
        if (nrm > 0.0)
            for (auto& z : v) z /= nrm;
        u.push_back(std::move(v));
    }
    return u;
}

// exact assignment by exhaustive permutation for the usual small n; greedy
// best-first matching beyond that (factorial enumeration stops being viable)
void best_assignment(const std::vector<std::vector<double>>& score,
                     std::vector<int>& best_perm) {
    const int n = static_cast<int>(score.size());
    if (n > 8) {
        best_perm.assign(n, -1);
        std::vector<bool> taken(n, false);
        for (int round = 0; round < n; ++round) {
            int bk = -1, bj = -1;
            double best = -1.0;
            for (int k = 0; k < n; ++k) {
                if (best_perm[k] >= 0) continue;
                for (int j = 0; j < n; ++j)
                    if (!taken[j] && score[k][j] > best) {
                        best = score[k][j];
                        bk = k;
                        bj = j;
                    }
            }
            best_perm[bk] = bj;
            taken[bj] = true;
        }
        return;
    }
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    best_perm = perm;
    double best = -1.0;
    do {
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += score[k][perm[k]];
        if (s > best) {
            best = s;
            best_perm = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
}

SweepRow make_row(const HamiltonianSpec& spec, double a, bool refined) {
    SweepRow row;
    row.a = a;
    row.refined = refined;
    try {
        row.dec = decompose(eval_at(spec, a));
        row.min_gap = min_pairwise_gap(row.dec);
    } catch (const SolverError&) {
        row.solver_failed = true;
        row.min_gap = std::numeric_limits<double>::quiet_NaN();
    }
    return row;
}

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

// median of the per-step tracked eigenvalue motion, for the auto threshold
double median_motion(const std::vector<SweepRow>& rows) {
    std::vector<double> motion;
    const SweepRow* prev = nullptr;
    for (const auto& row : rows) {
        if (row.solver_failed) continue;
        if (prev) {
            const std::vector<int> perm = track_states(prev->dec, row.dec);
            double m = 0.0;
            for (int k = 0; k < row.dec.n(); ++k)
                m = std::max(m, std::abs(row.dec.states[perm[k]].eigenvalue -
                                         prev->dec.states[k].eigenvalue));
            motion.push_back(m);
        }
        prev = &row;
    }
    return median(motion);
}

void refine_rows(const HamiltonianSpec& spec, std::vector<SweepRow>& rows,
                 double gap_threshold, int budget, double range, int* inserted) {
    const double floor = std::max(range * 0x1p-30, 64.0 * DBL_EPSILON);

    auto splittable = [&rows, floor](size_t i) {
        return !rows[i].solver_failed && !rows[i + 1].solver_failed &&
               rows[i + 1].a - rows[i].a > floor;
    };
    auto split = [&spec, &rows, &budget, inserted](size_t i) {
        const double mid = 0.5 * (rows[i].a + rows[i + 1].a);
        if (!(mid > rows[i].a && mid < rows[i + 1].a)) return false;
        rows.insert(rows.begin() + static_cast<long>(i) + 1, make_row(spec, mid, true));
        --budget;
        ++(*inserted);
        return true;
    };
    auto half_median_gap = [&rows]() {
        std::vector<double> gaps;
        for (const auto& r : rows)
            if (!r.solver_failed) gaps.push_back(r.min_gap);
        return 0.5 * median(gaps);
    };

    // stage 1: drill every gap dip by bisecting both neighbors of the current
    // minimum, re-targeting after each level so the cascade follows the EP
    while (budget > 0) {
        const double half_median = half_median_gap();
        size_t pick = rows.size();
        for (size_t i = 1; i + 1 < rows.size(); ++i) {
            if (rows[i].solver_failed || rows[i - 1].solver_failed || rows[i + 1].solver_failed)
                continue;
            if (!(rows[i].min_gap < rows[i - 1].min_gap && rows[i].min_gap <= rows[i + 1].min_gap))
                continue;
            if (rows[i].min_gap >= std::max(half_median, gap_threshold)) continue;
            if (!splittable(i - 1) && !splittable(i)) continue;  // drilled to the floor
            if (pick == rows.size() || rows[i].min_gap < rows[pick].min_gap) pick = i;
        }
        if (pick == rows.size()) break;
        bool progressed = false;
        if (splittable(pick)) progressed |= split(pick);                    // right side first:
        if (budget > 0 && splittable(pick - 1)) progressed |= split(pick - 1);  // keeps indices valid
        if (!progressed) break;
    }

    // stage 2: spend what is left on every interval under the gap threshold
    while (budget > 0) {
        size_t pick = rows.size();
        double pick_gap = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i + 1 < rows.size(); ++i) {
            if (!splittable(i)) continue;
            const double local = std::min(rows[i].min_gap, rows[i + 1].min_gap);
            if (local < gap_threshold && local < pick_gap) {
                pick_gap = local;
                pick = i;
            }
        }
        if (pick == rows.size() || !split(pick)) break;
    }
}

void tracking_pass(std::vector<SweepRow>& rows) {
    const SweepRow* prev = nullptr;
    for (auto& row : rows) {
        if (row.solver_failed) continue;
        if (prev) {
            bool disc = false;
            const std::vector<int> perm = track_states(prev->dec, row.dec, &disc);
            std::vector<EigenState> reordered;
            reordered.reserve(perm.size());
            for (int k = 0; k < static_cast<int>(perm.size()); ++k)
                reordered.push_back(std::move(row.dec.states[perm[k]]));
            row.dec.states = std::move(reordered);
            row.discontinuity = disc;
            // keep the +-1 gauge continuous along the sweep
            for (size_t k = 0; k < row.dec.states.size(); ++k) {
                const Complex ov = herm_product(prev->dec.states[k].vector, row.dec.states[k].vector);
                if (ov.real() < 0.0)
                    for (auto& z : row.dec.states[k].vector) z = -z;
            }
        }
        prev = &row;
    }
}

std::string row_flags(const SweepRow& row) {
    std::string s;
    auto add = [&s](const char* tok) {
        if (!s.empty()) s += '|';
        s += tok;
    };
    if (row.solver_failed) add("solver-failed");
    for (bool f : row.obs.flagged)
        if (f) {
            add("coalescent");
            break;
        }
    if (row.discontinuity) add("discontinuity");
    return s.empty() ? "-" : s;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<int> track_states(const SpectralDecomposition& prev,
                              const SpectralDecomposition& cur, bool* discontinuity) {
    if (prev.n() != cur.n())
        throw std::invalid_argument("track_states requires equal state counts");
    const int n = prev.n();
    const auto up = unit_vectors(prev);
    const auto uc = unit_vectors(cur);

    std::vector<std::vector<double>> score(n, std::vector<double>(n, 0.0));
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) score[k][j] = std::abs(c_product(up[k], uc[j]));

    std::vector<int> perm;
    best_assignment(score, perm);

    if (discontinuity) {
        *discontinuity = false;
        for (int k = 0; k < n; ++k)
            if (score[k][perm[k]] < kOverlapFlagThreshold) *discontinuity = true;
    }
    return perm;
}

std::optional<double> max_width_bifurcation(const SweepResult& result) {
    std::vector<const SweepRow*> rows;
    for (const auto& r : result.rows)
        if (!r.solver_failed) rows.push_back(&r);
    if (rows.size() < 3) return std::nullopt;

    double lam_scale = 0.0;
    for (const auto* r : rows)
        for (const auto& st : r->dec.states) lam_scale = std::max(lam_scale, std::abs(st.eigenvalue));
    const double tiny = 1e-12 * (1.0 + lam_scale);

    auto spread_series = [&rows](bool widths) {
        std::vector<double> s(rows.size());
        for (size_t i = 0; i < rows.size(); ++i) {
            double lo = std::numeric_limits<double>::infinity(), hi = -lo;
            for (const auto& st : rows[i]->dec.states) {
                const double v = widths ? st.half_width() : st.energy();
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            s[i] = hi - lo;
        }
        return s;
    };

    // a series counts only when its maximum is strictly interior: spreads that
    // just follow the input trajectories peak at the range boundary instead
    struct Candidate {
        bool valid{false};
        double a{0.0};
        double prominence{0.0};
    };
    auto interior_max = [&rows, tiny](const std::vector<double>& s) {
        Candidate c;
        size_t best = 0;
        for (size_t i = 1; i < s.size(); ++i)
            if (s[i] > s[best]) best = i;
        if (best == 0 || best + 1 == s.size()) return c;
        const double boundary = std::max(s.front(), s.back());
        if (s[best] <= boundary + tiny) return c;
        c.valid = true;
        c.a = rows[best]->a;
        c.prominence = s[best] - boundary;
        return c;
    };

    const Candidate width = interior_max(spread_series(true));
    const Candidate energy = interior_max(spread_series(false));
    if (!width.valid && !energy.valid) return std::nullopt;
    if (width.valid && (!energy.valid || width.prominence >= energy.prominence)) return width.a;
    return energy.a;
}

SweepResult run_sweep(const SweepConfig& config) {
    const SweepAxis& axis = config.axis;
    if (!(axis.min < axis.max)) throw std::invalid_argument("sweep requires min < max");
    if (axis.points < 3) throw std::invalid_argument("sweep requires at least 3 points");

    SweepResult result;
    result.config = config;
    result.rows.reserve(static_cast<size_t>(axis.points));
    for (int i = 0; i < axis.points; ++i) {
        const double t = static_cast<double>(i) / (axis.points - 1);
        const double a = axis.min * (1.0 - t) + axis.max * t;
        result.rows.push_back(make_row(config.spec, a, false));
    }

    if (config.refine.enable) {
        double thr = config.refine.gap_threshold;
        if (thr <= 0.0) thr = 10.0 * median_motion(result.rows);
        result.gap_threshold_used = thr;
        refine_rows(config.spec, result.rows, thr, config.refine.max_extra_points,
                    axis.max - axis.min, &result.refined_inserted);
    }

    tracking_pass(result.rows);

    for (auto& row : result.rows) {
        if (row.solver_failed) {
            ++result.failed_rows;
            continue;
        }
        row.obs = observe(row.dec);
    }
    if (result.failed_rows * 20 > static_cast<int>(result.rows.size()))
        throw SolverError("sweep failed: more than 5% of grid points did not decompose",
                          static_cast<double>(result.failed_rows));

    if (config.spec.n == 2) {
        result.ep_report = analytic_ep_two_level(config.spec);
    } else {
        for (const EpCandidate& cand : scan_minima(result)) {
            EpLocation loc = refine_ep(config.spec, cand.bracket_lo, cand.bracket_hi);
            // drop duplicates from adjacent candidate brackets, keeping the deeper dip
            bool dup = false;
            for (EpLocation& seen : result.ep_report.locations)
                if (std::abs(seen.a_star - loc.a_star) < 1e-4 * (axis.max - axis.min)) {
                    dup = true;
                    if (loc.min_gap < seen.min_gap) seen = loc;
                }
            if (!dup) result.ep_report.locations.push_back(loc);
        }
        std::sort(result.ep_report.locations.begin(), result.ep_report.locations.end(),
                  [](const EpLocation& a, const EpLocation& b) { return a.a_star < b.a_star; });
    }

    result.max_bifurcation_at = max_width_bifurcation(result);
    return result;
}

void write_csv(std::ostream& os, const SweepResult& result) {
    const int n = result.config.spec.n;
    const ColumnSelection& cols = result.config.outputs;

    os << result.config.axis.name;
    if (cols.eigenvalues) {
        for (int k = 1; k <= n; ++k) os << ",E_" << k;
        for (int k = 1; k <= n; ++k) os << ",G2_" << k;
    }
    if (cols.rigidity) {
        for (int k = 1; k <= n; ++k) os << ",r_" << k;
        for (int k = 1; k <= n; ++k) os << ",one_minus_r_" << k;
        for (int k = 1; k <= n; ++k) os << ",A_" << k;
    }
    if (cols.overlaps)
        for (int i = 1; i <= n; ++i)
            for (int j = i + 1; j <= n; ++j) os << ",B_" << i << j;
    if (cols.mixing)
        for (int k = 1; k <= n; ++k)
            for (int l = 1; l <= n; ++l) os << ",b_" << k << l;
    os << ",flags\n";

    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const SweepRow& row : result.rows) {
        os << format_double(row.a);
        const bool ok = !row.solver_failed;
        auto put = [&os](double v) { os << ',' << format_double(v); };
        if (cols.eigenvalues) {
            for (int k = 0; k < n; ++k) put(ok ? row.dec.states[k].energy() : nan);
            for (int k = 0; k < n; ++k) put(ok ? row.dec.states[k].half_width() : nan);
        }
        if (cols.rigidity) {
            for (int k = 0; k < n; ++k) put(ok ? row.obs.r[k] : nan);
            for (int k = 0; k < n; ++k) put(ok ? 1.0 - row.obs.r[k] : nan);
            for (int k = 0; k < n; ++k) put(ok ? row.obs.A[k] : nan);
        }
        if (cols.overlaps)
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) put(ok ? row.obs.B_abs[i][j] : nan);
        if (cols.mixing)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) put(ok ? row.obs.b_abs[k][l] : nan);
        os << ',' << row_flags(row) << '\n';
    }
}

void write_manifest(std::ostream& os, const SweepResult& result,
                    const std::string& model_id, bool include_timestamp) {
    KvDocument doc;
    doc.set("run.tool", "epsweep");
    doc.set("run.model", model_id);
    if (include_timestamp) {
        // informational only; diff tools must skip this line
        const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        char buf[32];
        std::tm tm{};
        gmtime_r(&now, &tm);
        std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
        doc.set("run.timestamp_utc", buf);
    }

    const KvDocument model = model_to_config(result.config.spec, result.config.axis);
    for (const auto& [k, v] : model.entries()) doc.set("model." + k, v);

    doc.set("grid.points_base", result.config.axis.points);
    doc.set("grid.points_total", static_cast<int>(result.rows.size()));
    doc.set("grid.refined_inserted", result.refined_inserted);
    doc.set("refine.enabled", result.config.refine.enable ? "true" : "false");
    doc.set("refine.gap_threshold_used", result.gap_threshold_used);
    doc.set("refine.max_extra_points", result.config.refine.max_extra_points);
    doc.set("rows.solver_failed", result.failed_rows);
    if (result.max_bifurcation_at)
        doc.set("bifurcation.max_at", *result.max_bifurcation_at);
    doc.serialize(os);

    os << '\n';
    write_ep_report_doc(os, result.ep_report, result.config.axis.name, model_id);
}

}  // namespace epsweep
