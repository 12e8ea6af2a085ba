#include "epsweep/spectra.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numbers>
#include <sstream>

namespace epsweep {

namespace {

constexpr double kInitRotation = 0.6180339887498949;   // 1/phi, radians
constexpr double kStartPhaseA = 0.9129452507276277;    // deterministic start vectors
constexpr double kStartPhaseB = 0.41421356237309515;

double matrix_scale(const HamiltonianMatrix& m) { return 1.0 + m.max_abs(); }

// ascending (Re, Im)
bool eigen_less(const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

double residual_of(const HamiltonianMatrix& m, const std::vector<Complex>& v, Complex lambda) {
    const int n = m.n();
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        Complex acc = -lambda * v[i];
        for (int j = 0; j < n; ++j) acc += m(i, j) * v[j];
        worst = std::max(worst, std::abs(acc));
    }
    return worst;
}

// +-1 continuity/determinism rule shared by both solver paths
void fix_sign(std::vector<Complex>& v, const std::vector<Complex>* previous) {
    if (previous && previous->size() == v.size()) {
        const Complex overlap = herm_product(*previous, v);
        if (overlap.real() < 0.0) {
            for (auto& z : v) z = -z;
            return;
        }
        if (overlap.real() > 0.0) return;
        // orthogonal to the reference; fall through to the standalone rule
    }
    size_t imax = 0;
    double best = -1.0;
    for (size_t i = 0; i < v.size(); ++i) {
        const double a = std::abs(v[i]);
        if (a > best) {
            best = a;
            imax = i;
        }
    }
    const Complex& c = v[imax];
    if (c.real() < 0.0 || (c.real() == 0.0 && c.imag() < 0.0))
        for (auto& z : v) z = -z;
}

// The characteristic-polynomial route pays for its simplicity with root
// conditioning: |p'(lambda)| is a product of eigenvalue gaps, so for the
// clustered spectra studied here the evaluation noise floor must sit well
// below double precision. All polynomial work therefore runs in long double.
using LComplex = std::complex<long double>;
constexpr long double kLdEps = 1.08420217248550443e-19L;

struct HornerEval {
    LComplex p;
    LComplex dp;
    long double bound;  // running magnitude bound for a residual floor
};

// coeffs = monic tail [c1..cn]; evaluates z^n + c1 z^{n-1} + ... + cn
HornerEval horner(const std::vector<LComplex>& coeffs, LComplex z) {
    HornerEval e{LComplex(1.0L, 0.0L), LComplex(0.0L, 0.0L), 1.0L};
    const long double az = std::abs(z);
    for (const LComplex& c : coeffs) {
        e.dp = e.dp * z + e.p;
        e.p = e.p * z + c;
        e.bound = e.bound * az + std::abs(c);
    }
    return e;
}

// monic characteristic polynomial of det(zI - M) by the Faddeev-LeVerrier
// recurrence, in extended precision
std::vector<LComplex> characteristic_polynomial_ld(const HamiltonianMatrix& m) {
    const int n = m.n();
    std::vector<LComplex> coeffs(n);
    std::vector<LComplex> work(static_cast<size_t>(n) * n), next(work.size());
    auto entry = [&m](int i, int j) {
        return LComplex(static_cast<long double>(m(i, j).real()),
                        static_cast<long double>(m(i, j).imag()));
    };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) work[static_cast<size_t>(i) * n + j] = entry(i, j);

    for (int k = 0; k < n; ++k) {
        LComplex tr{0.0L, 0.0L};
        for (int i = 0; i < n; ++i) tr += work[static_cast<size_t>(i) * n + i];
        const LComplex ck = -tr / static_cast<long double>(k + 1);
        coeffs[k] = ck;
        if (k + 1 == n) break;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                LComplex acc{0.0L, 0.0L};
                for (int l = 0; l < n; ++l) {
                    LComplex wlj = work[static_cast<size_t>(l) * n + j];
                    if (l == j) wlj += ck;
                    acc += entry(i, l) * wlj;
                }
                next[static_cast<size_t>(i) * n + j] = acc;
            }
        std::swap(work, next);
    }
    return coeffs;
}

std::vector<LComplex> aberth_roots(const std::vector<LComplex>& coeffs, double radius) {
    const int n = static_cast<int>(coeffs.size());
    std::vector<LComplex> z(n), w(n);
    for (int k = 0; k < n; ++k) {
        const double phi = 2.0 * std::numbers::pi * k / n + kInitRotation;
        z[k] = LComplex(radius * std::cos(phi), radius * std::sin(phi));
    }

    long double worst_resid = 0.0L;
    for (int iter = 0; iter < kMaxRootIterations; ++iter) {
        bool step_converged = true;
        bool resid_converged = true;
        worst_resid = 0.0L;
        for (int k = 0; k < n; ++k) {
            const HornerEval e = horner(coeffs, z[k]);
            const long double floor = 8.0L * n * kLdEps * e.bound;
            worst_resid = std::max(worst_resid, std::abs(e.p));
            if (std::abs(e.p) <= floor) {
                w[k] = LComplex(0.0L, 0.0L);
                continue;
            }
            resid_converged = false;
            LComplex dp = e.dp;
            if (dp == LComplex(0.0L, 0.0L)) dp = LComplex(kLdEps, 0.0L);
            const LComplex newton = e.p / dp;
            LComplex s{0.0L, 0.0L};
            for (int j = 0; j < n; ++j) {
                if (j == k) continue;
                LComplex d = z[k] - z[j];
                if (d == LComplex(0.0L, 0.0L)) d = LComplex(kLdEps * (1.0L + radius), 0.0L);
                s += 1.0L / d;
            }
            const LComplex denom = 1.0L - newton * s;
            w[k] = (denom == LComplex(0.0L, 0.0L)) ? newton : newton / denom;
            if (std::abs(w[k]) > kTauRoot * (1.0L + std::abs(z[k]))) step_converged = false;
        }
        for (int k = 0; k < n; ++k) z[k] -= w[k];
        if (step_converged || resid_converged) return z;
    }

    std::ostringstream os;
    os << "root iteration did not converge after " << kMaxRootIterations
       << " iterations (max |p(z)| = " << static_cast<double>(worst_resid) << ")";
    throw SolverError(os.str(), static_cast<double>(worst_resid));
}

void newton_polish(const std::vector<LComplex>& coeffs, LComplex& root) {
    HornerEval e = horner(coeffs, root);
    for (int step = 0; step < 3; ++step) {
        if (e.dp == LComplex(0.0L, 0.0L)) return;
        const LComplex cand = root - e.p / e.dp;
        const HornerEval ec = horner(coeffs, cand);
        if (std::abs(ec.p) >= std::abs(e.p)) return;
        root = cand;
        e = ec;
    }
}

// in-place complex LU with partial pivoting; near-zero pivots are floored so
// inverse iteration at an exact eigenvalue stays solvable
struct LuFactors {
    int n;
    std::vector<Complex> a;  // row-major, factored
    std::vector<int> perm;

    static LuFactors factor(const HamiltonianMatrix& m, Complex shift, double pivot_floor) {
        const int n = m.n();
        LuFactors f{n, std::vector<Complex>(static_cast<size_t>(n) * n), std::vector<int>(n)};
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                f.a[static_cast<size_t>(i) * n + j] = m(i, j) - (i == j ? shift : Complex(0.0, 0.0));
        for (int i = 0; i < n; ++i) f.perm[i] = i;

        auto at = [&f, n](int i, int j) -> Complex& { return f.a[static_cast<size_t>(i) * n + j]; };
        for (int col = 0; col < n; ++col) {
            int piv = col;
            double best = std::abs(at(col, col));
            for (int r = col + 1; r < n; ++r) {
                const double v = std::abs(at(r, col));
                if (v > best) {
                    best = v;
                    piv = r;
                }
            }
            if (piv != col) {
                for (int j = 0; j < n; ++j) std::swap(at(piv, j), at(col, j));
                std::swap(f.perm[piv], f.perm[col]);
            }
            Complex& d = at(col, col);
            if (std::abs(d) < pivot_floor)
                d = (d == Complex(0.0, 0.0)) ? Complex(pivot_floor, 0.0)
                                             : d * (pivot_floor / std::abs(d));
            for (int r = col + 1; r < n; ++r) {
                const Complex l = at(r, col) / d;
                at(r, col) = l;
                for (int j = col + 1; j < n; ++j) at(r, j) -= l * at(col, j);
            }
        }
        return f;
    }

    std::vector<Complex> solve(const std::vector<Complex>& b) const {
        std::vector<Complex> x(n);
        for (int i = 0; i < n; ++i) x[i] = b[perm[i]];
        auto at = [this](int i, int j) { return a[static_cast<size_t>(i) * n + j]; };
        for (int i = 1; i < n; ++i)
            for (int j = 0; j < i; ++j) x[i] -= at(i, j) * x[j];
        for (int i = n - 1; i >= 0; --i) {
            for (int j = i + 1; j < n; ++j) x[i] -= at(i, j) * x[j];
            x[i] /= at(i, i);
        }
        return x;
    }
};

void normalize_unit(std::vector<Complex>& v) {
    const double nrm = herm_norm(v);
    if (nrm == 0.0) throw SolverError("inverse iteration produced a zero vector", 0.0);
    for (auto& z : v) z /= nrm;
}

double unit_collinearity(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    const Complex ov = herm_product(a, b);
    double na = 0.0, nb = 0.0;
    for (const auto& z : a) na += std::norm(z);
    for (const auto& z : b) nb += std::norm(z);
    if (na == 0.0 || nb == 0.0) return 0.0;
    return std::norm(ov) / (na * nb);
}

// Collapse of an eigenvalue pair with collinear vectors is a defective (EP)
// pair: suppress the c-normalization and keep unit-Hermitian fallbacks.
// Orthogonal (diabolic) degeneracies pass through untouched.
bool flag_if_defective(SpectralDecomposition& dec, const HamiltonianMatrix& m, int i, int j) {
    if (unit_collinearity(dec.states[i].vector, dec.states[j].vector) <= 0.5) return false;
    for (int k : {i, j}) {
        EigenState& st = dec.states[k];
        normalize_unit(st.vector);
        fix_sign(st.vector, nullptr);
        st.c_norm_ok = false;
        st.residual = residual_of(m, st.vector, st.eigenvalue);
    }
    dec.coalescent_pairs.push_back({i, j});
    return true;
}

}  // namespace

bool SpectralDecomposition::any_flagged() const {
    for (const auto& s : states)
        if (!s.c_norm_ok) return true;
    return false;
}

Complex c_product(std::span<const Complex> a, std::span<const Complex> b) {
    Complex s{0.0, 0.0};
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

Complex herm_product(std::span<const Complex> a, std::span<const Complex> b) {
    Complex s{0.0, 0.0};
    for (size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

double herm_norm(std::span<const Complex> a) {
    double s = 0.0;
    for (const auto& z : a) s += std::norm(z);
    return std::sqrt(s);
}

CNormResult c_normalize(std::vector<Complex> v, const std::vector<Complex>* previous) {
    const double nrm = herm_norm(v);
    if (!(nrm > 0.0) || !std::isfinite(nrm))
        throw std::invalid_argument("c_normalize: zero or non-finite vector");
    for (auto& z : v) z /= nrm;

    const Complex s = c_product(v, v);
    CNormResult out;
    out.unit_c_product = std::abs(s);
    if (out.unit_c_product <= kTauEp) {
        out.c_norm_ok = false;
        fix_sign(v, previous);
        out.vector = std::move(v);
        return out;
    }
    const Complex root = std::sqrt(s);
    for (auto& z : v) z /= root;
    fix_sign(v, previous);
    out.vector = std::move(v);
    return out;
}

Complex discriminant_z(const HamiltonianMatrix& m) {
    if (m.n() != 2) throw std::invalid_argument("discriminant_z requires n == 2");
    const Complex d = m(0, 0) - m(1, 1);
    const Complex w = m(0, 1);
    return 0.5 * std::sqrt(d * d + 4.0 * w * w);
}

SpectralDecomposition eigen_2x2_analytic(const HamiltonianMatrix& m) {
    if (m.n() != 2) throw std::invalid_argument("eigen_2x2_analytic requires n == 2");
    const double scale = matrix_scale(m);
    const Complex mean = 0.5 * (m(0, 0) + m(1, 1));
    const Complex delta = 0.5 * (m(0, 0) - m(1, 1));
    const Complex w = m(0, 1);
    const Complex z = std::sqrt(delta * delta + w * w);  // = discriminant_z

    const Complex lam_plus = mean + z;
    const Complex lam_minus = mean - z;

    std::vector<Complex> v_plus, v_minus;
    const Complex zp = z + delta;
    const Complex zm = z - delta;
    if (w == Complex(0.0, 0.0)) {
        // diagonal matrix: unit basis, matched to the closer eigenvalue
        const bool first_is_plus = std::abs(m(0, 0) - lam_plus) <= std::abs(m(1, 1) - lam_plus);
        v_plus = first_is_plus ? std::vector<Complex>{1.0, 0.0} : std::vector<Complex>{0.0, 1.0};
        v_minus = first_is_plus ? std::vector<Complex>{0.0, 1.0} : std::vector<Complex>{1.0, 0.0};
    } else if (std::abs(zp) >= std::abs(zm)) {
        v_plus = {zp, w};
        v_minus = {-w, zp};
    } else {
        v_plus = {w, zm};
        v_minus = {zm, -w};
    }

    EigenState plus{lam_plus, {}, true, 0.0};
    EigenState minus{lam_minus, {}, true, 0.0};
    {
        CNormResult r = c_normalize(std::move(v_plus));
        plus.vector = std::move(r.vector);
        plus.c_norm_ok = r.c_norm_ok;
        plus.residual = residual_of(m, plus.vector, plus.eigenvalue);
    }
    {
        CNormResult r = c_normalize(std::move(v_minus));
        minus.vector = std::move(r.vector);
        minus.c_norm_ok = r.c_norm_ok;
        minus.residual = residual_of(m, minus.vector, minus.eigenvalue);
    }

    SpectralDecomposition dec;
    dec.states = {std::move(plus), std::move(minus)};
    std::sort(dec.states.begin(), dec.states.end(),
              [](const EigenState& a, const EigenState& b) { return eigen_less(a.eigenvalue, b.eigenvalue); });

    const bool gap_collapsed = std::abs(2.0 * z) < kTauEp * scale;
    const bool both_degenerate = !dec.states[0].c_norm_ok && !dec.states[1].c_norm_ok;
    if (gap_collapsed || both_degenerate) {
        if (!flag_if_defective(dec, m, 0, 1) && both_degenerate)
            dec.coalescent_pairs.push_back({0, 1});
    }
    return dec;
}

std::vector<Complex> characteristic_polynomial(const HamiltonianMatrix& m) {
    std::vector<Complex> out;
    for (const LComplex& c : characteristic_polynomial_ld(m))
        out.emplace_back(static_cast<double>(c.real()), static_cast<double>(c.imag()));
    return out;
}

SpectralDecomposition eigen_general(const HamiltonianMatrix& m) {
    const int n = m.n();
    if (n < 2) throw std::invalid_argument("eigen_general requires n >= 2");
    const double scale = matrix_scale(m);

    const std::vector<LComplex> coeffs = characteristic_polynomial_ld(m);
    std::vector<LComplex> roots_ld = aberth_roots(coeffs, scale);
    for (auto& r : roots_ld) newton_polish(coeffs, r);
    std::vector<Complex> roots;
    roots.reserve(n);
    for (const LComplex& r : roots_ld)
        roots.emplace_back(static_cast<double>(r.real()), static_cast<double>(r.imag()));
    std::sort(roots.begin(), roots.end(), eigen_less);

    const double pivot_floor = DBL_EPSILON * scale * n;
    const double residual_goal = 1e-9 * scale;

    SpectralDecomposition dec;
    dec.states.reserve(n);
    for (int k = 0; k < n; ++k) {
        const LuFactors lu = LuFactors::factor(m, roots[k], pivot_floor);

        std::vector<Complex> x(n);
        for (int j = 0; j < n; ++j) {
            const double phi = kStartPhaseA * (j + 1) + kStartPhaseB * (k + 1);
            x[j] = Complex(std::cos(phi), std::sin(phi));
        }
        normalize_unit(x);

        auto reorthogonalize = [&]() {
            for (int j = 0; j < k; ++j) {
                if (std::abs(roots[k] - dec.states[j].eigenvalue) > kClusterWindow * scale) continue;
                if (!dec.states[j].c_norm_ok) continue;  // no safe c-projection at an EP
                const Complex proj = c_product(x, dec.states[j].vector);
                for (int i = 0; i < n; ++i) x[i] -= proj * dec.states[j].vector[i];
            }
        };

        for (int pass = 0; pass < 4; ++pass) {
            x = lu.solve(x);
            normalize_unit(x);
            reorthogonalize();
            normalize_unit(x);
            if (pass >= 1 && residual_of(m, x, roots[k]) <= 0.5 * residual_goal) break;
        }

        CNormResult cn = c_normalize(std::move(x));
        EigenState st;
        st.eigenvalue = roots[k];
        st.vector = std::move(cn.vector);
        st.c_norm_ok = cn.c_norm_ok;
        st.residual = residual_of(m, st.vector, st.eigenvalue);
        dec.states.push_back(std::move(st));
    }

    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double gap = std::abs(dec.states[i].eigenvalue - dec.states[j].eigenvalue);
            const bool degenerate = !dec.states[i].c_norm_ok && !dec.states[j].c_norm_ok;
            if (gap < kTauEp * scale || degenerate)
                if (!flag_if_defective(dec, m, i, j) && degenerate)
                    dec.coalescent_pairs.push_back({i, j});
        }
    return dec;
}

SpectralDecomposition decompose(const HamiltonianMatrix& m) {
    return m.n() == 2 ? eigen_2x2_analytic(m) : eigen_general(m);
}

}  // namespace epsweep
