#include "epsweep/eplocate.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <ostream>

#include "epsweep/config.hpp"
#include "epsweep/observables.hpp"
#include "epsweep/sweep.hpp"

namespace epsweep {

namespace {

constexpr double kExactImagTol = 1e-9;   // |Im root| below this: real EP
constexpr double kNearMissImagTol = 1e-2;
constexpr double kCollinearHi = 0.99;
constexpr double kCollinearLo = 0.01;
constexpr int kPrescanPoints = 65;

// 4Z^2(a) as a complex quadratic q2 a^2 + q1 a + q0
struct ZSquaredPoly {
    Complex q2, q1, q0;

    Complex eval(double a) const { return (q2 * a + q1) * a + q0; }

    static ZSquaredPoly from(const HamiltonianSpec& spec) {
        const Complex det_slope(spec.energy[0].slope - spec.energy[1].slope,
                                spec.halfwidth[0].slope - spec.halfwidth[1].slope);
        const Complex det_icept(spec.energy[0].intercept - spec.energy[1].intercept,
                                spec.halfwidth[0].intercept - spec.halfwidth[1].intercept);
        ZSquaredPoly p;
        p.q2 = det_slope * det_slope;
        p.q1 = 2.0 * det_icept * det_slope;
        p.q0 = det_icept * det_icept + 4.0 * spec.omega * spec.omega;
        return p;
    }
};

std::vector<Complex> quadratic_roots(const ZSquaredPoly& p) {
    const double sc = std::max({std::abs(p.q2), std::abs(p.q1), std::abs(p.q0)});
    const double tiny = 1e-14 * sc;
    if (sc == 0.0) return {};
    if (std::abs(p.q2) <= tiny) {
        if (std::abs(p.q1) <= tiny) return {};
        return {-p.q0 / p.q1};
    }
    const Complex disc = p.q1 * p.q1 - 4.0 * p.q2 * p.q0;
    Complex sq = std::sqrt(disc);
    // pick the sign that avoids cancellation in q1 + sq
    if ((std::conj(p.q1) * sq).real() < 0.0) sq = -sq;
    const Complex qq = -0.5 * (p.q1 + sq);
    if (qq == Complex(0.0, 0.0)) return {-p.q1 / (2.0 * p.q2)};
    std::vector<Complex> roots{qq / p.q2, p.q0 / qq};
    if (std::abs(roots[0] - roots[1]) < 1e-12 * (1.0 + std::abs(roots[0]))) roots.pop_back();
    return roots;
}

struct PairGap {
    double gap;
    std::pair<int, int> pair;
};

PairGap min_pair_gap(const SpectralDecomposition& dec) {
    PairGap pg{std::numeric_limits<double>::infinity(), {0, 1}};
    for (int i = 0; i < dec.n(); ++i)
        for (int j = i + 1; j < dec.n(); ++j) {
            const double g = std::abs(dec.states[i].eigenvalue - dec.states[j].eigenvalue);
            if (g < pg.gap) pg = {g, {i, j}};
        }
    return pg;
}

Classification classify_decomposition(const SpectralDecomposition& dec, double scale) {
    const PairGap pg = min_pair_gap(dec);
    const RealMatrix col = ep_proximity(dec);
    Classification cls;
    cls.gap = pg.gap;
    cls.pair = pg.pair;
    cls.collinearity = col[pg.pair.first][pg.pair.second];
    const double tol = 1e-8 * scale;
    if (cls.gap >= tol)
        cls.kind = Degeneracy::Avoided;
    else if (cls.collinearity > kCollinearHi)
        cls.kind = Degeneracy::Exceptional;
    else if (cls.collinearity < kCollinearLo)
        cls.kind = Degeneracy::Diabolic;
    else
        cls.kind = Degeneracy::Ambiguous;
    return cls;
}

double pair_min_r(const SpectralDecomposition& dec, std::pair<int, int> pair) {
    const auto r = phase_rigidity(dec);
    return std::min(r[pair.first], r[pair.second]);
}

EpLocation location_at(const HamiltonianSpec& spec, double a_star, EpKind kind,
                       double imag_distance) {
    const HamiltonianMatrix m = eval_at(spec, a_star);
    const SpectralDecomposition dec = decompose(m);
    const Classification cls = classify_decomposition(dec, 1.0 + m.max_abs());
    EpLocation loc;
    loc.a_star = a_star;
    loc.kind = kind;
    loc.pair = cls.pair;
    loc.min_gap = cls.gap;
    loc.r_at = pair_min_r(dec, cls.pair);
    loc.degeneracy = cls.kind;
    loc.imag_distance = imag_distance;
    return loc;
}

}  // namespace

std::string to_string(EpKind k) {
    return k == EpKind::ExactRoot ? "exact-root" : "near-miss-minimum";
}

std::string to_string(Degeneracy d) {
    switch (d) {
        case Degeneracy::Exceptional: return "exceptional";
        case Degeneracy::Diabolic: return "diabolic";
        case Degeneracy::Avoided: return "avoided";
        default: return "ambiguous";
    }
}

EpReport analytic_ep_two_level(const HamiltonianSpec& spec) {
    if (spec.n != 2) throw std::invalid_argument("analytic_ep_two_level requires n == 2");
    const ZSquaredPoly poly = ZSquaredPoly::from(spec);

    EpReport report;
    const double sc = std::max({std::abs(poly.q2), std::abs(poly.q1), std::abs(poly.q0)});
    if (sc == 0.0) {
        report.degenerate_line = true;  // identical levels, no coupling: degenerate everywhere
        return report;
    }

    for (const Complex& root : quadratic_roots(poly)) {
        const double im = std::abs(root.imag());
        if (im < kExactImagTol) {
            EpLocation loc = location_at(spec, root.real(), EpKind::ExactRoot, 0.0);
            if (loc.degeneracy == Degeneracy::Diabolic)
                report.diabolic_crossings.push_back(root.real());
            else
                report.locations.push_back(loc);
        } else if (im <= kNearMissImagTol) {
            report.locations.push_back(
                location_at(spec, root.real(), EpKind::NearMissMinimum, im));
        }
    }
    std::sort(report.locations.begin(), report.locations.end(),
              [](const EpLocation& a, const EpLocation& b) { return a.a_star < b.a_star; });
    std::sort(report.diabolic_crossings.begin(), report.diabolic_crossings.end());

    // Balanced gain-loss families keep the whole spectrum real where 4Z^2 > 0.
    const double gsum_i = spec.halfwidth[0].intercept + spec.halfwidth[1].intercept;
    const double gsum_s = spec.halfwidth[0].slope + spec.halfwidth[1].slope;
    const bool traceless_width = std::abs(gsum_i) <= 1e-14 && std::abs(gsum_s) <= 1e-14;
    const bool poly_real = std::abs(poly.q2.imag()) <= 1e-14 * sc &&
                           std::abs(poly.q1.imag()) <= 1e-14 * sc &&
                           std::abs(poly.q0.imag()) <= 1e-14 * sc;
    if (traceless_width && poly_real && poly.q2.real() < 0.0) {
        const double a2 = poly.q2.real(), a1 = poly.q1.real(), a0 = poly.q0.real();
        const double disc = a1 * a1 - 4.0 * a2 * a0;
        if (disc > 0.0) {
            const double s = std::sqrt(disc);
            double x1 = (-a1 + s) / (2.0 * a2);
            double x2 = (-a1 - s) / (2.0 * a2);
            if (x1 > x2) std::swap(x1, x2);
            report.real_spectrum_windows.push_back({x1, x2});
        }
    }
    return report;
}

std::vector<EpCandidate> scan_minima(const SweepResult& sweep) {
    std::vector<int> usable;
    for (int i = 0; i < static_cast<int>(sweep.rows.size()); ++i)
        if (!sweep.rows[i].solver_failed) usable.push_back(i);
    if (usable.size() < 3) return {};

    std::vector<double> gap(usable.size()), rmin(usable.size());
    for (size_t u = 0; u < usable.size(); ++u) {
        const SweepRow& row = sweep.rows[usable[u]];
        gap[u] = row.min_gap;
        rmin[u] = 1.0;
        for (double r : row.obs.r) rmin[u] = std::min(rmin[u], r);
    }

    std::vector<double> sorted_gap = gap;
    std::sort(sorted_gap.begin(), sorted_gap.end());
    const double median_gap = sorted_gap[sorted_gap.size() / 2];

    std::vector<int> hits;
    for (size_t u = 1; u + 1 < usable.size(); ++u) {
        const bool gap_dip = gap[u] < gap[u - 1] && gap[u] < gap[u + 1] && gap[u] < 0.1 * median_gap;
        const bool r_dip = rmin[u] < rmin[u - 1] && rmin[u] < rmin[u + 1] && rmin[u] < 0.5;
        if (gap_dip || r_dip) hits.push_back(static_cast<int>(u));
    }

    // merge hits that sit in one dip region (refined grids put many rows there)
    const double merge_width =
        1e-3 * (sweep.rows[usable.back()].a - sweep.rows[usable.front()].a);
    std::vector<EpCandidate> out;
    size_t h = 0;
    while (h < hits.size()) {
        size_t h2 = h;
        while (h2 + 1 < hits.size() &&
               (hits[h2 + 1] - hits[h2] <= 2 ||
                sweep.rows[usable[hits[h2 + 1]]].a - sweep.rows[usable[hits[h2]]].a <= merge_width))
            ++h2;
        int best = hits[h];
        for (size_t k = h; k <= h2; ++k)
            if (gap[hits[k]] < gap[best]) best = hits[k];

        const SweepRow& row = sweep.rows[usable[best]];
        EpCandidate cand;
        cand.a_center = row.a;
        cand.bracket_lo = sweep.rows[usable[std::max(best - 1, 0)]].a;
        cand.bracket_hi = sweep.rows[usable[std::min(best + 1, static_cast<int>(usable.size()) - 1)]].a;
        cand.min_gap = gap[best];
        cand.min_r = rmin[best];
        PairGap pg = min_pair_gap(row.dec);
        cand.pair = pg.pair;
        out.push_back(cand);
        h = h2 + 1;
    }
    return out;
}

EpLocation refine_ep(const HamiltonianSpec& spec, double lo, double hi) {
    if (!(lo < hi)) throw std::invalid_argument("refine_ep requires lo < hi");
    auto gap_at = [&spec](double a) { return min_pair_gap(decompose(eval_at(spec, a))).gap; };

    // coarse pre-scan: locate the global minimum and detect extra dips
    std::vector<double> t(kPrescanPoints), g(kPrescanPoints);
    for (int i = 0; i < kPrescanPoints; ++i) {
        const double u = static_cast<double>(i) / (kPrescanPoints - 1);
        t[i] = lo * (1.0 - u) + hi * u;
        g[i] = gap_at(t[i]);
    }
    int minima = 0, best = 0;
    for (int i = 1; i + 1 < kPrescanPoints; ++i) {
        if (g[i] < g[i - 1] && g[i] < g[i + 1]) ++minima;
        if (g[i] < g[best]) best = i;
    }
    if (g[0] < g[best]) best = 0;
    if (g[kPrescanPoints - 1] < g[best]) best = kPrescanPoints - 1;
    const bool non_unimodal = minima > 1;

    double a = t[std::max(best - 1, 0)];
    double b = t[std::min(best + 1, kPrescanPoints - 1)];

    constexpr double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = gap_at(x1), f2 = gap_at(x2);
    // descend to machine resolution: the gap grows like sqrt(|a - a*|) at an
    // EP, so certifying gap < 1e-8*scale needs a bracket far below kGoldenWidth
    const double width_floor = 4.0 * DBL_EPSILON * std::max({1.0, std::abs(a), std::abs(b)});
    while (b - a > width_floor) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = gap_at(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = gap_at(x2);
        }
    }
    const double a_star = 0.5 * (a + b);

    const HamiltonianMatrix m = eval_at(spec, a_star);
    const SpectralDecomposition dec = decompose(m);
    const double scale = 1.0 + m.max_abs();
    const Classification cls = classify_decomposition(dec, scale);

    EpLocation loc;
    loc.a_star = a_star;
    loc.kind = cls.gap < 1e-8 * scale ? EpKind::ExactRoot : EpKind::NearMissMinimum;
    loc.pair = cls.pair;
    loc.min_gap = cls.gap;
    loc.r_at = pair_min_r(dec, cls.pair);
    loc.degeneracy = cls.kind;
    loc.non_unimodal = non_unimodal;
    return loc;
}

Classification classify(const HamiltonianSpec& spec, double a_star) {
    const HamiltonianMatrix m = eval_at(spec, a_star);
    return classify_decomposition(decompose(m), 1.0 + m.max_abs());
}

EpReport locate_eps(const HamiltonianSpec& spec, const SweepAxis& axis) {
    if (spec.n == 2) return analytic_ep_two_level(spec);
    SweepConfig config;
    config.spec = spec;
    config.axis = axis;
    return run_sweep(config).ep_report;
}

void write_ep_report_doc(std::ostream& os, const EpReport& report,
                         const std::string& axis_name, const std::string& model_id) {
    KvDocument doc;
    doc.set("report.model", model_id);
    doc.set("report.axis", axis_name);
    doc.set("report.degenerate_line", report.degenerate_line ? "true" : "false");
    doc.set("report.n_locations", static_cast<int>(report.locations.size()));
    for (size_t i = 0; i < report.locations.size(); ++i) {
        const EpLocation& loc = report.locations[i];
        const std::string p = "location." + std::to_string(i + 1) + ".";
        doc.set(p + "a_star", loc.a_star);
        doc.set(p + "kind", to_string(loc.kind));
        doc.set(p + "degeneracy", to_string(loc.degeneracy));
        doc.set(p + "pair", std::to_string(loc.pair.first + 1) + "," + std::to_string(loc.pair.second + 1));
        doc.set(p + "min_gap", loc.min_gap);
        doc.set(p + "r_at", loc.r_at);
        if (loc.kind == EpKind::NearMissMinimum) doc.set(p + "imag_distance", loc.imag_distance);
        if (loc.non_unimodal) doc.set(p + "non_unimodal", "true");
    }
    doc.set("report.n_real_spectrum_windows", static_cast<int>(report.real_spectrum_windows.size()));
    for (size_t i = 0; i < report.real_spectrum_windows.size(); ++i) {
        const std::string p = "window." + std::to_string(i + 1) + ".";
        doc.set(p + "min", report.real_spectrum_windows[i].lo);
        doc.set(p + "max", report.real_spectrum_windows[i].hi);
    }
    doc.set("report.n_diabolic_crossings", static_cast<int>(report.diabolic_crossings.size()));
    for (size_t i = 0; i < report.diabolic_crossings.size(); ++i)
        doc.set("diabolic." + std::to_string(i + 1) + ".a", report.diabolic_crossings[i]);
    doc.serialize(os);
}

}  // namespace epsweep
