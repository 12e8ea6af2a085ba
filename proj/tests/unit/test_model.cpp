#include <doctest.h>

#include <cmath>
#include <limits>

#include "epsweep/model.hpp"

using namespace epsweep;

namespace {
ParamCurve cc(double i, double s = 0.0) { return {i, s}; }
}

TEST_CASE("two-level builder reproduces the tabulated matrices") {
    // equal constant levels, no coupling: diagonal at any a
    const auto diag = build_two_level(cc(0.5), cc(0.5), cc(0.0), cc(0.0), {0.0, 0.0});
    for (double a : {-1.0, 0.0, 2.5}) {
        const auto m = eval_at(diag, a);
        CHECK(m(0, 0) == Complex(0.5, 0.0));
        CHECK(m(1, 1) == Complex(0.5, 0.0));
        CHECK(m(0, 1) == Complex(0.0, 0.0));
    }

    // first tabulated family at d = 0
    const auto& row1 = preset("fig1a-d");
    const auto m = eval_at(row1.spec, 0.0);
    CHECK(m(0, 0).real() == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(m(0, 0).imag() == -0.5);
    CHECK(m(1, 1) == m(0, 0));
    CHECK(m(0, 1) == Complex(0.0, 0.05));
    CHECK(m(1, 0) == m(0, 1));

    // gain-loss family at a = 1: one growing, one decaying state
    const auto g = eval_at(preset("fig3a-d").spec, 1.0);
    CHECK(g(0, 0).imag() == doctest::Approx(0.05).epsilon(1e-15));
    CHECK(g(1, 1).imag() == doctest::Approx(-0.05).epsilon(1e-15));
}

TEST_CASE("eval_at is exact affine evaluation") {
    const auto& row2 = preset("fig1e-h");
    const auto m1 = eval_at(row2.spec, 1.0);
    CHECK(m1(0, 0).imag() == -0.5);
    CHECK(m1(1, 1).imag() == -0.5);

    const auto& row1 = preset("fig1a-d");
    const auto m = eval_at(row1.spec, 0.1);
    CHECK(m(1, 1).real() - m(0, 0).real() == doctest::Approx(0.1).epsilon(1e-14));

    // a = 0 gives the intercepts
    for (const auto& p : preset_catalog()) {
        const auto m0 = eval_at(p.spec, 0.0);
        for (int i = 0; i < p.spec.n; ++i) {
            CHECK(m0(i, i).real() == p.spec.energy[i].intercept);
            CHECK(m0(i, i).imag() == p.spec.halfwidth[i].intercept);
        }
    }
}

TEST_CASE("doorway topology places the coupling in row/column 1 only") {
    const auto& p5 = preset("fig5-3lev");
    const auto m = eval_at(p5.spec, 0.7);
    CHECK(m(0, 1) == Complex(0.0, 0.01));
    CHECK(m(0, 2) == Complex(0.0, 0.01));
    CHECK(m(1, 2) == Complex(0.0, 0.0));
    CHECK(m(2, 1) == Complex(0.0, 0.0));

    const auto& p7 = preset("fig7-4lev-complex");
    const auto m7 = eval_at(p7.spec, 0.6);
    for (int i = 1; i < 4; ++i)
        for (int j = 1; j < 4; ++j)
            if (i != j) CHECK(m7(i, j) == Complex(0.0, 0.0));

    // n = 2 doorway coincides with the dense 2x2 shape
    const auto two = build_n_level({cc(0.1), cc(0.2)}, {cc(-0.3), cc(-0.4)}, {0.0, 0.05});
    const auto m2 = eval_at(two, 0.0);
    CHECK(m2(0, 1) == Complex(0.0, 0.05));
    CHECK(m2(1, 0) == Complex(0.0, 0.05));
}

TEST_CASE("matrices are symmetric bitwise across the preset ranges") {
    for (const auto& p : preset_catalog()) {
        for (int s = 0; s <= 6; ++s) {
            const double t = s / 6.0;
            const double a = p.axis.min * (1.0 - t) + p.axis.max * t;
            const auto m = eval_at(p.spec, a);
            for (int i = 0; i < p.spec.n; ++i) {
                for (int j = 0; j < p.spec.n; ++j) {
                    CHECK(m(i, j) == m(j, i));
                    CHECK(std::isfinite(m(i, j).real()));
                    CHECK(std::isfinite(m(i, j).imag()));
                }
                CHECK(m(i, i).real() == p.spec.energy[i].value(a));
                CHECK(m(i, i).imag() == p.spec.halfwidth[i].value(a));
            }
        }
    }
}

TEST_CASE("builders reject invalid input") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(build_two_level(cc(nan), cc(0.0), cc(0.0), cc(0.0), {0.0, 0.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_two_level(cc(0.0), cc(0.0), cc(0.0), cc(0.0),
                                    {std::numeric_limits<double>::infinity(), 0.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_n_level({cc(0.0)}, {cc(0.0)}, {0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(eval_at(preset("fig1a-d").spec, nan), std::invalid_argument);
}

TEST_CASE("preset catalog covers the figure ids and rejects unknown ones") {
    const auto ids = preset_ids();
    CHECK(ids.size() == 14);
    for (const char* id :
         {"fig1a-d", "fig1e-h", "fig2a-d", "fig2e-h", "fig3a-d", "fig3e-h", "fig4a-e", "fig4f-j",
          "fig5-2lev", "fig5-3lev", "fig6-2lev", "fig6-3lev", "fig7-4lev-imag", "fig7-4lev-complex"})
        CHECK_NOTHROW(preset(id));

    CHECK(preset("fig1a-d").spec.omega == Complex(0.0, 0.05));
    CHECK(preset("fig1a-d").spec.halfwidth[0].intercept == -0.5);
    CHECK(preset("fig1a-d").spec.halfwidth[1].intercept == -0.5);

    const auto& f6 = preset("fig6-2lev");
    CHECK(f6.spec.omega == Complex(0.005, 0.005));
    CHECK(f6.spec.halfwidth[0].intercept == -0.5);
    CHECK(f6.spec.halfwidth[1].intercept == -0.51);
    CHECK(f6.spec.energy[0].intercept == 0.5);
    CHECK(f6.spec.energy[1].slope == 1.0);

    const auto& f3 = preset("fig3a-d");
    CHECK(f3.spec.halfwidth[0].slope == 0.05);
    CHECK(f3.spec.halfwidth[1].slope == -0.05);

    try {
        preset("bogus-id");
        CHECK(false);
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        CHECK(msg.find("fig1a-d") != std::string::npos);
        CHECK(msg.find("fig7-4lev-complex") != std::string::npos);
    }
}
