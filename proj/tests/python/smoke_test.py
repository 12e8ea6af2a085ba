"""Smoke tests for the epsweep python module (run via ctest with PYTHONPATH
pointing at the built extension)."""

import math

import epsweep


def approx(a, b, tol):
    return abs(a - b) <= tol


def test_presets():
    ids = epsweep.preset_ids()
    assert "fig1a-d" in ids and "fig7-4lev-complex" in ids
    assert len(ids) == 14


def test_matrix_and_eig():
    model = epsweep.preset("fig1a-d")
    assert model.n == 2
    m = model.matrix(0.0)
    assert approx(m[0][0].real, 2.0 / 3.0, 1e-14)
    assert approx(m[0][1].imag, 0.05, 1e-15)

    eig = model.eig(0.0)
    half_widths = sorted(v.imag for v in eig["eigenvalues"])
    assert approx(half_widths[0], -0.55, 1e-12)
    assert approx(half_widths[1], -0.45, 1e-12)


def test_observables_spot_value():
    model = epsweep.preset("fig1a-d")
    obs = model.observables(0.12)
    assert approx(obs["r"][0], math.sqrt(11.0) / 6.0, 5e-4)
    assert approx(obs["A"][0], 6.0 / math.sqrt(11.0), 1e-3)
    assert approx(obs["B_abs"][0][1], 5.0 / math.sqrt(11.0), 1e-3)


def test_locate_eps():
    report = epsweep.preset("fig1a-d").locate_eps()
    stars = sorted(loc["a_star"] for loc in report["locations"])
    assert len(stars) == 2
    assert approx(stars[0], -0.1, 1e-6) and approx(stars[1], 0.1, 1e-6)

    window = epsweep.preset("fig3a-d").locate_eps()["real_spectrum_windows"]
    assert len(window) == 1
    assert approx(window[0][0], -1.0, 1e-9) and approx(window[0][1], 1.0, 1e-9)


def test_sweep_profile_and_determinism():
    model = epsweep.preset("fig1a-d")
    sweep = model.sweep(points=401)
    assert sweep["axis"] == "d"
    rigid = max(r for r in sweep["r"][0] if r is not None)
    assert rigid > 0.999999
    assert min(r for r in sweep["r"][0] if r is not None) < 0.05
    assert sweep["max_width_bifurcation_at"] is not None
    assert abs(sweep["max_width_bifurcation_at"]) < 2e-3

    assert model.sweep_csv(points=201) == model.sweep_csv(points=201)


def test_custom_two_level():
    model = epsweep.two_level(
        epsweep.ParamCurve(0.5), epsweep.ParamCurve(0.5),
        epsweep.ParamCurve(-0.5), epsweep.ParamCurve(0.0, -0.5),
        0.05 + 0.0j, axis="a", min=0.4, max=1.6, points=301,
    )
    stars = sorted(loc["a_star"] for loc in model.locate_eps()["locations"])
    assert approx(stars[0], 0.8, 1e-6) and approx(stars[1], 1.2, 1e-6)


if __name__ == "__main__":
    failures = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            try:
                fn()
                print(f"ok   {name}")
            except AssertionError as exc:
                failures += 1
                print(f"FAIL {name}: {exc}")
    raise SystemExit(failures)
