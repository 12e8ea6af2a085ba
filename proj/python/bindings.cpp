// python bindings: the preset catalog, matrix evaluation, eigendecomposition,
// biorthogonality observables, EP location and full sweeps.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "epsweep/config.hpp"
#include "epsweep/eplocate.hpp"
#include "epsweep/model.hpp"
#include "epsweep/observables.hpp"
#include "epsweep/spectra.hpp"
#include "epsweep/sweep.hpp"

namespace py = pybind11;
using namespace epsweep;

namespace {

py::dict decomposition_dict(const SpectralDecomposition& dec) {
    py::list values, vectors, ok, residuals;
    for (const auto& st : dec.states) {
        values.append(st.eigenvalue);
        vectors.append(st.vector);
        ok.append(st.c_norm_ok);
        residuals.append(st.residual);
    }
    py::dict d;
    d["eigenvalues"] = values;
    d["vectors"] = vectors;
    d["c_norm_ok"] = ok;
    d["residuals"] = residuals;
    d["coalescent_pairs"] = dec.coalescent_pairs;
    return d;
}

py::dict observables_dict(const SpectralDecomposition& dec) {
    const ObservableRecord rec = observe(dec);
    py::dict d;
    d["r"] = rec.r;
    d["A"] = rec.A;
    d["flagged"] = rec.flagged;
    d["B_abs"] = rec.B_abs;
    d["b_abs"] = rec.b_abs;
    d["collinearity"] = rec.collinearity;
    return d;
}

py::dict report_dict(const EpReport& report) {
    py::list locations;
    for (const auto& loc : report.locations) {
        py::dict l;
        l["a_star"] = loc.a_star;
        l["kind"] = to_string(loc.kind);
        l["degeneracy"] = to_string(loc.degeneracy);
        l["pair"] = loc.pair;
        l["min_gap"] = loc.min_gap;
        l["r_at"] = loc.r_at;
        locations.append(l);
    }
    py::list windows;
    for (const auto& w : report.real_spectrum_windows) windows.append(py::make_tuple(w.lo, w.hi));
    py::dict d;
    d["locations"] = locations;
    d["real_spectrum_windows"] = windows;
    d["diabolic_crossings"] = report.diabolic_crossings;
    d["degenerate_line"] = report.degenerate_line;
    return d;
}

struct Model {
    HamiltonianSpec spec;
    SweepAxis axis;
    std::string id;

    std::vector<std::vector<Complex>> matrix(double a) const {
        const auto m = eval_at(spec, a);
        std::vector<std::vector<Complex>> out(m.n(), std::vector<Complex>(m.n()));
        for (int i = 0; i < m.n(); ++i)
            for (int j = 0; j < m.n(); ++j) out[i][j] = m(i, j);
        return out;
    }

    py::dict eig(double a) const { return decomposition_dict(decompose(eval_at(spec, a))); }
    py::dict observables(double a) const { return observables_dict(decompose(eval_at(spec, a))); }
    py::dict locate_eps_dict() const { return report_dict(locate_eps(spec, axis)); }

    SweepResult run(int points, double lo, double hi, bool refine) const {
        SweepConfig config;
        config.spec = spec;
        config.axis = axis;
        if (points > 0) config.axis.points = points;
        if (lo < hi) {
            config.axis.min = lo;
            config.axis.max = hi;
        }
        config.refine.enable = refine;
        return run_sweep(config);
    }

    py::dict sweep(int points, double lo, double hi, bool refine) const {
        const SweepResult s = run(points, lo, hi, refine);
        const int n = spec.n;
        py::list a;
        std::vector<py::list> E(n), G2(n), r(n), A(n);
        py::list flags;
        for (const auto& row : s.rows) {
            a.append(row.a);
            for (int k = 0; k < n; ++k) {
                if (row.solver_failed) {
                    E[k].append(py::none());
                    G2[k].append(py::none());
                    r[k].append(py::none());
                    A[k].append(py::none());
                } else {
                    E[k].append(row.dec.states[k].energy());
                    G2[k].append(row.dec.states[k].half_width());
                    r[k].append(row.obs.r[k]);
                    A[k].append(row.obs.A[k]);
                }
            }
            std::string f;
            if (row.solver_failed) f += "solver-failed;";
            if (row.discontinuity) f += "discontinuity;";
            for (bool fl : row.obs.flagged)
                if (fl) {
                    f += "coalescent;";
                    break;
                }
            flags.append(f);
        }
        py::dict d;
        d["axis"] = s.config.axis.name;
        d["a"] = a;
        auto pack = [n](std::vector<py::list>& v) {
            py::list out;
            for (int k = 0; k < n; ++k) out.append(v[k]);
            return out;
        };
        d["E"] = pack(E);
        d["G2"] = pack(G2);
        d["r"] = pack(r);
        d["A"] = pack(A);
        d["flags"] = flags;
        d["ep_report"] = report_dict(s.ep_report);
        d["max_width_bifurcation_at"] =
            s.max_bifurcation_at ? py::cast(*s.max_bifurcation_at) : py::none();
        return d;
    }

    std::string sweep_csv(int points, double lo, double hi, bool refine) const {
        std::ostringstream os;
        write_csv(os, run(points, lo, hi, refine));
        return os.str();
    }
};

Model model_from_preset(const std::string& id) {
    const Preset& p = preset(id);
    return Model{p.spec, p.axis, p.id};
}

}  // namespace

PYBIND11_MODULE(epsweep, m) {
    m.doc() = "spectra, exceptional points and biorthogonality observables of small "
              "non-Hermitian Hamiltonians";

    py::class_<ParamCurve>(m, "ParamCurve")
        .def(py::init<double, double>(), py::arg("intercept"), py::arg("slope") = 0.0)
        .def_readwrite("intercept", &ParamCurve::intercept)
        .def_readwrite("slope", &ParamCurve::slope)
        .def("value", &ParamCurve::value);

    py::class_<Model>(m, "Model")
        .def_readonly("id", &Model::id)
        .def_property_readonly("n", [](const Model& mm) { return mm.spec.n; })
        .def_property_readonly("omega", [](const Model& mm) { return mm.spec.omega; })
        .def_property_readonly("axis_name", [](const Model& mm) { return mm.axis.name; })
        .def_property_readonly("axis_range",
                               [](const Model& mm) { return py::make_tuple(mm.axis.min, mm.axis.max); })
        .def("matrix", &Model::matrix, py::arg("a"), "Hamiltonian matrix at a parameter value")
        .def("eig", &Model::eig, py::arg("a"),
             "eigenvalues and c-normalized eigenvectors at a parameter value")
        .def("observables", &Model::observables, py::arg("a"),
             "phase rigidity, norms, overlaps and mixing at a parameter value")
        .def("locate_eps", &Model::locate_eps_dict, "exceptional-point report")
        .def("sweep", &Model::sweep, py::arg("points") = 0, py::arg("min") = 0.0,
             py::arg("max") = 0.0, py::arg("refine") = true,
             "run a parameter sweep; returns tracked trajectory columns")
        .def("sweep_csv", &Model::sweep_csv, py::arg("points") = 0, py::arg("min") = 0.0,
             py::arg("max") = 0.0, py::arg("refine") = true,
             "run a parameter sweep and return the CSV text");

    m.def("preset_ids", &preset_ids, "list the built-in figure presets");
    m.def("preset", &model_from_preset, py::arg("id"), "load a figure preset");
    m.def(
        "two_level",
        [](ParamCurve e1, ParamCurve e2, ParamCurve g1, ParamCurve g2, Complex omega,
           const std::string& axis, double lo, double hi, int points) {
            return Model{build_two_level(e1, e2, g1, g2, omega), {axis, lo, hi, points}, "custom"};
        },
        py::arg("e1"), py::arg("e2"), py::arg("g1"), py::arg("g2"), py::arg("omega"),
        py::arg("axis") = "a", py::arg("min") = 0.0, py::arg("max") = 1.0,
        py::arg("points") = 1001, "two-level model from affine curves");
    m.def(
        "n_level",
        [](std::vector<ParamCurve> e, std::vector<ParamCurve> g, Complex omega,
           const std::string& axis, double lo, double hi, int points) {
            return Model{build_n_level(std::move(e), std::move(g), omega),
                         {axis, lo, hi, points},
                         "custom"};
        },
        py::arg("energies"), py::arg("halfwidths"), py::arg("omega"), py::arg("axis") = "a",
        py::arg("min") = 0.0, py::arg("max") = 1.0, py::arg("points") = 1001,
        "doorway model: omega couples state 1 to every other state");

    m.attr("__version__") = "0.1.0";
}
