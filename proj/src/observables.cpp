#include "epsweep/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace epsweep {

ObservableRecord observe(const SpectralDecomposition& dec) {
    const int n = dec.n();
    ObservableRecord rec;
    rec.r.resize(n);
    rec.A.resize(n);
    rec.unit_c_product.resize(n);
    rec.flagged.resize(n);
    rec.B_abs.assign(n, std::vector<double>(n, 0.0));
    rec.b_abs.assign(n, std::vector<double>(n, 0.0));
    rec.collinearity.assign(n, std::vector<double>(n, 0.0));

    for (int k = 0; k < n; ++k) {
        const auto& v = dec.states[k].vector;
        double a = 0.0;
        for (const auto& z : v) a += std::norm(z);

        rec.flagged[k] = !dec.states[k].c_norm_ok;
        const double nrm2 = a;  // ||phi||^2 of the stored vector
        rec.unit_c_product[k] = nrm2 > 0.0 ? std::abs(c_product(v, v)) / nrm2 : 0.0;

        if (rec.flagged[k]) {
            rec.r[k] = 0.0;
            rec.A[k] = std::numeric_limits<double>::infinity();
        } else {
            a = std::max(a, 1.0);
            rec.A[k] = a;
            rec.r[k] = std::min(1.0 / a, 1.0);
        }
        for (int l = 0; l < n; ++l) rec.b_abs[k][l] = std::abs(v[l]);
        rec.collinearity[k][k] = 1.0;
    }

    auto norm2 = [](const std::vector<Complex>& v) {
        double s = 0.0;
        for (const auto& z : v) s += std::norm(z);
        return s;
    };
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const auto& vi = dec.states[i].vector;
            const auto& vj = dec.states[j].vector;
            const Complex ov = herm_product(vi, vj);
            rec.B_abs[i][j] = rec.B_abs[j][i] = std::abs(ov);
            const double ni = norm2(vi);
            const double nj = norm2(vj);
            double col = (ni > 0.0 && nj > 0.0) ? std::norm(ov) / (ni * nj) : 0.0;
            col = std::clamp(col, 0.0, 1.0);
            rec.collinearity[i][j] = rec.collinearity[j][i] = col;
        }
    }
    return rec;
}

std::vector<double> phase_rigidity(const SpectralDecomposition& dec) { return observe(dec).r; }

std::vector<double> norm_a(const SpectralDecomposition& dec) { return observe(dec).A; }

RealMatrix overlaps_b(const SpectralDecomposition& dec) { return observe(dec).B_abs; }

RealMatrix mixing_coeffs(const SpectralDecomposition& dec) { return observe(dec).b_abs; }

RealMatrix ep_proximity(const SpectralDecomposition& dec) { return observe(dec).collinearity; }

}  // namespace epsweep
