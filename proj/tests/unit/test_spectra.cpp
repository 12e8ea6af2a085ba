#include <doctest.h>

#include <cmath>
#include <random>

#include "epsweep/model.hpp"
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

double vector_distance_mod_sign(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    double dp = 0.0, dm = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        dp = std::max(dp, std::abs(a[i] - b[i]));
        dm = std::max(dm, std::abs(a[i] + b[i]));
    }
    return std::min(dp, dm);
}

double left_eigen_residual(const HamiltonianMatrix& m, const EigenState& st) {
    double worst = 0.0;
    for (int j = 0; j < m.n(); ++j) {
        Complex acc = -st.eigenvalue * st.vector[j];
        for (int i = 0; i < m.n(); ++i) acc += st.vector[i] * m(i, j);
        worst = std::max(worst, std::abs(acc));
    }
    return worst;
}

}  // namespace

TEST_CASE("discriminant follows the closed form") {
    // degenerate decoupled pair: Z = 0
    HamiltonianMatrix m(2);
    m(0, 0) = m(1, 1) = Complex(0.3, -0.1);
    CHECK(std::abs(discriminant_z(m)) == 0.0);

    // equal levels at d = 0: Z = omega = 0.05i
    const auto& p1 = preset("fig1a-d");
    const Complex z0 = discriminant_z(eval_at(p1.spec, 0.0));
    CHECK(std::abs(z0 - Complex(0.0, 0.05)) < 1e-15);

    // the EP of the same family: Z vanishes at d = 0.1 (double-precision floor)
    CHECK(std::abs(discriminant_z(eval_at(p1.spec, 0.1))) < 1e-8);
}

TEST_CASE("analytic 2x2 matches the hand-computed width bifurcation point") {
    const auto dec = eigen_2x2_analytic(eval_at(preset("fig1a-d").spec, 0.0));
    REQUIRE(dec.n() == 2);
    CHECK(dec.states[0].energy() == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(dec.states[1].energy() == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(dec.states[0].half_width() == doctest::Approx(-0.55).epsilon(1e-12));
    CHECK(dec.states[1].half_width() == doctest::Approx(-0.45).epsilon(1e-12));

    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(vector_distance_mod_sign(dec.states[0].vector, {inv_sqrt2, -inv_sqrt2}) < 1e-12);
    CHECK(vector_distance_mod_sign(dec.states[1].vector, {inv_sqrt2, inv_sqrt2}) < 1e-12);
    CHECK(dec.states[0].c_norm_ok);
    CHECK(dec.states[1].c_norm_ok);
    CHECK(dec.coalescent_pairs.empty());
}

TEST_CASE("gain-loss family is real inside the window") {
    const auto dec = eigen_2x2_analytic(eval_at(preset("fig3a-d").spec, 0.5));
    const double split = std::sqrt(0.001875);  // 0.04330127...
    CHECK(dec.states[0].eigenvalue.real() == doctest::Approx(0.5 - split).epsilon(1e-12));
    CHECK(dec.states[1].eigenvalue.real() == doctest::Approx(0.5 + split).epsilon(1e-12));
    CHECK(std::abs(dec.states[0].eigenvalue.imag()) < 1e-15);
    CHECK(std::abs(dec.states[1].eigenvalue.imag()) < 1e-15);
}

TEST_CASE("diagonal matrices keep the unit basis") {
    HamiltonianMatrix m(2);
    m(0, 0) = Complex(0.9, -0.2);
    m(1, 1) = Complex(0.1, -0.4);
    const auto dec = eigen_2x2_analytic(m);
    CHECK(std::abs(dec.states[0].eigenvalue - m(1, 1)) < 1e-15);
    CHECK(std::abs(dec.states[1].eigenvalue - m(0, 0)) < 1e-15);
    CHECK(vector_distance_mod_sign(dec.states[0].vector, {0.0, 1.0}) < 1e-15);
    CHECK(vector_distance_mod_sign(dec.states[1].vector, {1.0, 0.0}) < 1e-15);

    HamiltonianMatrix d4(4);
    d4(0, 0) = Complex(0.4, -0.1);
    d4(1, 1) = Complex(-0.3, 0.2);
    d4(2, 2) = Complex(1.1, -0.6);
    d4(3, 3) = Complex(0.0, 0.0);
    const auto g = eigen_general(d4);
    for (const auto& st : g.states) {
        bool found = false;
        for (int i = 0; i < 4; ++i)
            if (std::abs(st.eigenvalue - d4(i, i)) < 1e-12) {
                found = true;
                std::vector<Complex> unit(4, Complex(0.0, 0.0));
                unit[static_cast<size_t>(i)] = 1.0;
                CHECK(vector_distance_mod_sign(st.vector, unit) < 1e-10);
            }
        CHECK(found);
    }
}

TEST_CASE("c-normalization honors the bilinear norm and the sign rules") {
    {
        const auto r = c_normalize({Complex(1.0, 0.0), Complex(1.0, 0.0)});
        CHECK(r.c_norm_ok);
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        CHECK(std::abs(r.vector[0] - inv_sqrt2) < 1e-15);
        CHECK(std::abs(r.vector[1] - inv_sqrt2) < 1e-15);
    }
    {
        // chiral EP vector: c-product exactly zero, Hermitian fallback
        const auto r = c_normalize({Complex(1.0, 0.0), Complex(0.0, 1.0)});
        CHECK_FALSE(r.c_norm_ok);
        CHECK(r.unit_c_product < 1e-15);
        CHECK(std::abs(std::abs(r.vector[0]) - 1.0 / std::sqrt(2.0)) < 1e-15);
    }
    {
        // rotation-angle eigenvector at d = 0.12 is already c-normalized:
        // t = -(i/2) artanh(5/6), vector (cos t, sin t)
        const double y = 0.5 * std::atanh(5.0 / 6.0);
        const std::vector<Complex> v{Complex(std::cosh(y), 0.0), Complex(0.0, -std::sinh(y))};
        const auto r = c_normalize(v);
        CHECK(r.c_norm_ok);
        CHECK(vector_distance_mod_sign(r.vector, v) < 1e-12);
    }
    {
        // continuity against a reference flips the sign
        const std::vector<Complex> prev{Complex(-1.0, 0.0), Complex(0.0, 0.0)};
        const auto r = c_normalize({Complex(1.0, 0.0), Complex(0.0, 0.0)}, &prev);
        CHECK(r.vector[0].real() == doctest::Approx(-1.0));
    }
    CHECK_THROWS_AS(c_normalize({Complex(0.0, 0.0)}), std::invalid_argument);
}

TEST_CASE("general solver agrees with the analytic block plus a decoupled level") {
    const auto two = eval_at(preset("fig1a-d").spec, 0.12);
    HamiltonianMatrix m(3);
    m(0, 0) = two(0, 0);
    m(1, 1) = two(1, 1);
    m.set_sym(0, 1, two(0, 1));
    m(2, 2) = Complex(0.9, -0.3);

    const auto block = eigen_2x2_analytic(two);
    const auto full = eigen_general(m);
    REQUIRE(full.n() == 3);

    CHECK(std::abs(full.states[0].eigenvalue - block.states[0].eigenvalue) < 1e-10);
    CHECK(std::abs(full.states[1].eigenvalue - block.states[1].eigenvalue) < 1e-10);
    CHECK(std::abs(full.states[2].eigenvalue - Complex(0.9, -0.3)) < 1e-12);

    for (int k = 0; k < 2; ++k) {
        const std::vector<Complex> embedded{block.states[k].vector[0], block.states[k].vector[1],
                                            Complex(0.0, 0.0)};
        CHECK(vector_distance_mod_sign(full.states[k].vector, embedded) < 1e-9);
    }
}

TEST_CASE("sum of eigenvalues equals the trace") {
    const auto& p5 = preset("fig5-3lev");
    const auto m = eval_at(p5.spec, 2.0 / 3.0);
    const auto dec = eigen_general(m);
    Complex sum{0.0, 0.0};
    for (const auto& st : dec.states) sum += st.eigenvalue;
    const Complex tr = m.trace();
    CHECK(std::abs(sum - tr) < 1e-12 * (1.0 + std::abs(tr)));

    std::mt19937_64 rng(7);
    for (int n : {2, 3, 4, 6, 8}) {
        for (int rep = 0; rep < 5; ++rep) {
            const auto r = random_symmetric(n, rng);
            const auto d = eigen_general(r);
            Complex s{0.0, 0.0};
            for (const auto& st : d.states) s += st.eigenvalue;
            CHECK(std::abs(s - r.trace()) < 1e-12 * (1.0 + std::abs(r.trace())));
        }
    }
}

TEST_CASE("general and analytic routes agree on random two-level draws") {
    std::mt19937_64 rng(20260808);
    int tested = 0;
    for (int rep = 0; rep < 1000; ++rep) {
        const auto m = random_symmetric(2, rng);
        if (std::abs(discriminant_z(m)) < 1e-6) continue;
        ++tested;
        const auto a = eigen_2x2_analytic(m);
        const auto g = eigen_general(m);
        for (int k = 0; k < 2; ++k) {
            CHECK(std::abs(a.states[k].eigenvalue - g.states[k].eigenvalue) < 1e-10);
            CHECK(vector_distance_mod_sign(a.states[k].vector, g.states[k].vector) < 1e-8);
        }
    }
    CHECK(tested > 990);
}

TEST_CASE("Hermitian limit: real spectrum and orthonormal vectors") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int n : {2, 4, 6}) {
        HamiltonianMatrix m(n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) m.set_sym(i, j, Complex(u(rng), 0.0));
        const auto dec = eigen_general(m);
        for (const auto& st : dec.states) CHECK(std::abs(st.eigenvalue.imag()) < 1e-12);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const Complex gram = herm_product(dec.states[i].vector, dec.states[j].vector);
                CHECK(std::abs(gram - (i == j ? 1.0 : 0.0)) < 1e-10);
            }
    }
}

TEST_CASE("residuals, left-eigenvector identity and c-orthogonality hold") {
    std::mt19937_64 rng(23);
    for (int n : {2, 3, 4, 6}) {
        for (int rep = 0; rep < 10; ++rep) {
            const auto m = random_symmetric(n, rng);
            const double scale = 1.0 + m.max_abs();
            const auto dec = eigen_general(m);
            for (const auto& st : dec.states) {
                CHECK(st.residual <= 1e-9 * scale);
                CHECK(left_eigen_residual(m, st) <= 1e-8 * scale);
                if (st.c_norm_ok)
                    CHECK(std::abs(c_product(st.vector, st.vector) - 1.0) < 1e-10);
            }
            if (!dec.coalescent_pairs.empty() || dec.any_flagged()) continue;
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j)
                    CHECK(std::abs(c_product(dec.states[i].vector, dec.states[j].vector)) < 1e-8);
        }
    }
}
