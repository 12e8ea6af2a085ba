#include <doctest.h>

#include <cmath>
#include <random>

#include "epsweep/model.hpp"
#include "epsweep/observables.hpp"
#include "epsweep/spectra.hpp"

using namespace epsweep;

namespace {

HamiltonianMatrix random_symmetric(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    HamiltonianMatrix m(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) m.set_sym(i, j, Complex(u(rng), u(rng)));
    return m;
}

}  // namespace

TEST_CASE("maximum width bifurcation point: rigid phases, full mixing") {
    const auto dec = eigen_2x2_analytic(eval_at(preset("fig1a-d").spec, 0.0));
    const auto rec = observe(dec);

    CHECK(std::abs(rec.r[0] - 1.0) < 1e-12);
    CHECK(std::abs(rec.r[1] - 1.0) < 1e-12);
    CHECK(std::abs(rec.A[0] - 1.0) < 1e-12);
    CHECK(rec.B_abs[0][1] < 1e-10);
    for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
            CHECK(rec.b_abs[k][l] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(rec.collinearity[0][1] < 1e-10);
}

TEST_CASE("spot values at d = 0.12 from the rotation-angle oracle") {
    // tan 2t = 2*omega/(eps1-eps2) = -(5/6)i  =>  2t = -i artanh(5/6), and with
    // y = artanh(5/6)/2 the eigenvector is (cosh y, -i sinh y):
    //   r = 1/cosh(2y) = sqrt(11)/6, A = 6/sqrt(11), |B| = 5/sqrt(11).
    const double r_expect = std::sqrt(11.0) / 6.0;        // 0.5527707983925667
    const double a_expect = 6.0 / std::sqrt(11.0);        // 1.8090680674665816
    const double b_expect = 5.0 / std::sqrt(11.0);        // 1.5075567228888181
    const double y = 0.5 * std::atanh(5.0 / 6.0);
    CHECK(1.0 / std::cosh(2.0 * y) == doctest::Approx(r_expect).epsilon(1e-14));

    const auto dec = eigen_2x2_analytic(eval_at(preset("fig1a-d").spec, 0.12));
    const auto rec = observe(dec);

    CHECK(rec.r[0] == doctest::Approx(r_expect).epsilon(1e-12));
    CHECK(rec.r[1] == doctest::Approx(r_expect).epsilon(1e-12));
    CHECK(rec.A[0] == doctest::Approx(a_expect).epsilon(1e-12));
    CHECK(rec.B_abs[0][1] == doctest::Approx(b_expect).epsilon(1e-12));

    // both mixing rows hold {cosh y, sinh y} in some order
    for (int k = 0; k < 2; ++k) {
        double lo = std::min(rec.b_abs[k][0], rec.b_abs[k][1]);
        double hi = std::max(rec.b_abs[k][0], rec.b_abs[k][1]);
        CHECK(hi == doctest::Approx(std::cosh(y)).epsilon(1e-12));
        CHECK(lo == doctest::Approx(std::sinh(y)).epsilon(1e-12));
    }

    // the overlap is purely imaginary for the two-level system
    const Complex ov = herm_product(dec.states[0].vector, dec.states[1].vector);
    CHECK(std::abs(ov.real()) < 1e-12);
}

TEST_CASE("Hermitian limit gives unit rigidity and no overlap") {
    HamiltonianMatrix m(2);
    m(0, 0) = Complex(0.2, 0.0);
    m(1, 1) = Complex(0.9, 0.0);
    m.set_sym(0, 1, Complex(0.13, 0.0));
    const auto rec = observe(eigen_2x2_analytic(m));
    CHECK(rec.r[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rec.r[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rec.A[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rec.B_abs[0][1] < 1e-10);
    CHECK(rec.collinearity[0][1] < 1e-10);
}

TEST_CASE("flagged coalescent states carry the sentinels") {
    const auto dec = eigen_2x2_analytic(eval_at(preset("fig1a-d").spec, 0.1));
    REQUIRE(dec.any_flagged());
    const auto rec = observe(dec);
    for (int k = 0; k < 2; ++k) {
        if (!rec.flagged[k]) continue;
        CHECK(rec.r[k] == 0.0);
        CHECK(std::isinf(rec.A[k]));
    }
    // chiral pair: collinearity 1 at the EP
    CHECK(rec.collinearity[0][1] > 0.999);
}

TEST_CASE("collinearity of the chiral pair is one") {
    // the coalescing pair is phi and +-i*phi: (1, i) and i*(1, i) = (i, -1)
    SpectralDecomposition dec;
    dec.states.resize(2);
    dec.states[0].vector = {Complex(1.0, 0.0), Complex(0.0, 1.0)};
    dec.states[1].vector = {Complex(0.0, 1.0), Complex(-1.0, 0.0)};
    dec.states[0].c_norm_ok = dec.states[1].c_norm_ok = false;
    const auto col = ep_proximity(dec);
    CHECK(col[0][1] == doctest::Approx(1.0).epsilon(1e-14));

    // the opposite chiral vector (1, -i) ~ (i, 1) is orthogonal instead
    dec.states[1].vector = {Complex(0.0, 1.0), Complex(1.0, 0.0)};
    CHECK(ep_proximity(dec)[0][1] < 1e-14);
}

TEST_CASE("collinearity grows quadratically toward the EP") {
    // inside the fig1a-d window the collinearity is exactly (d/0.1)^2
    const auto& p = preset("fig1a-d");
    double last = -1.0;
    for (double d : {0.02, 0.05, 0.08, 0.095, 0.099}) {
        const auto col = ep_proximity(eigen_2x2_analytic(eval_at(p.spec, d)));
        CHECK(col[0][1] == doctest::Approx(100.0 * d * d).epsilon(1e-9));
        CHECK(col[0][1] > last);
        last = col[0][1];
    }
}

TEST_CASE("record-level consistency identities") {
    std::mt19937_64 rng(5);
    for (int n : {2, 3, 4}) {
        for (int rep = 0; rep < 20; ++rep) {
            const auto dec = decompose(random_symmetric(n, rng));
            const auto rec = observe(dec);
            for (int k = 0; k < n; ++k) {
                if (rec.flagged[k]) continue;
                CHECK(rec.r[k] * rec.A[k] == doctest::Approx(1.0).epsilon(1e-12));
                CHECK(rec.r[k] >= 0.0);
                CHECK(rec.r[k] <= 1.0);
                CHECK(rec.A[k] >= 1.0);
                double sum = 0.0;
                for (int l = 0; l < n; ++l) sum += rec.b_abs[k][l] * rec.b_abs[k][l];
                CHECK(sum == doctest::Approx(rec.A[k]).epsilon(1e-10));
            }
            if (n == 2 && !rec.flagged[0] && !rec.flagged[1])
                CHECK(std::abs(rec.r[0] - rec.r[1]) < 1e-10);
        }
    }
}

TEST_CASE("two-level Hermitian overlaps are purely imaginary and antisymmetric") {
    std::mt19937_64 rng(17);
    for (int rep = 0; rep < 50; ++rep) {
        const auto m = random_symmetric(2, rng);
        if (std::abs(discriminant_z(m)) < 1e-6) continue;
        const auto dec = eigen_2x2_analytic(m);
        const Complex ov01 = herm_product(dec.states[0].vector, dec.states[1].vector);
        const Complex ov10 = herm_product(dec.states[1].vector, dec.states[0].vector);
        CHECK(std::abs(ov01.real()) < 1e-8);
        CHECK(std::abs(ov01 + ov10) < 1e-8);
    }
}

TEST_CASE("Hermitian Gram of a c-orthonormal set satisfies G conj(G) = I") {
    // the n-level generalization of the purely-imaginary overlap property
    std::mt19937_64 rng(29);
    for (int n : {3, 4, 6}) {
        for (int rep = 0; rep < 10; ++rep) {
            const auto dec = eigen_general(random_symmetric(n, rng));
            if (dec.any_flagged()) continue;
            std::vector<std::vector<Complex>> g(n, std::vector<Complex>(n));
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    g[i][j] = herm_product(dec.states[i].vector, dec.states[j].vector);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    Complex acc{0.0, 0.0};
                    for (int l = 0; l < n; ++l) acc += g[i][l] * std::conj(g[l][j]);
                    CHECK(std::abs(acc - (i == j ? 1.0 : 0.0)) < 1e-8);
                }
        }
    }
}
