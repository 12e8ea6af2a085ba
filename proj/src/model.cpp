#include "epsweep/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace epsweep {

namespace {

bool finite(double x) { return std::isfinite(x); }
bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void require_finite_curve(const ParamCurve& c, const char* what, int index) {
    if (!finite(c.intercept) || !finite(c.slope)) {
        std::ostringstream os;
        os << "non-finite " << what << " curve for state " << (index + 1)
           << " (intercept=" << c.intercept << ", slope=" << c.slope << ")";
        throw std::invalid_argument(os.str());
    }
}

void validate(const HamiltonianSpec& spec) {
    if (spec.n < 2) throw std::invalid_argument("model requires n >= 2 states");
    if (spec.topology == Topology::FullTwoLevel && spec.n != 2)
        throw std::invalid_argument("full-2x2 topology requires n == 2");
    if (static_cast<int>(spec.energy.size()) != spec.n ||
        static_cast<int>(spec.halfwidth.size()) != spec.n)
        throw std::invalid_argument("curve count does not match n");
    for (int i = 0; i < spec.n; ++i) {
        require_finite_curve(spec.energy[i], "energy", i);
        require_finite_curve(spec.halfwidth[i], "half-width", i);
    }
    if (!finite(spec.omega)) throw std::invalid_argument("non-finite coupling omega");
}

ParamCurve c(double intercept, double slope = 0.0) { return ParamCurve{intercept, slope}; }

std::vector<Preset> make_catalog() {
    const double third2 = 2.0 / 3.0;
    std::vector<Preset> v;

    v.push_back({"fig1a-d", "two EPs, imaginary coupling, width bifurcation",
                 build_two_level(c(third2), c(third2, 1.0), c(-0.5), c(-0.5), Complex(0.0, 0.05)),
                 {"d", -0.3, 0.3, 1001}});
    v.push_back({"fig1e-h", "two EPs, real coupling, level repulsion",
                 build_two_level(c(0.5), c(0.5), c(-0.5), c(0.0, -0.5), Complex(0.05, 0.0)),
                 {"a", 0.4, 1.6, 1001}});
    v.push_back({"fig2a-d", "single EP, complex coupling, energy sweep",
                 build_two_level(c(third2), c(third2, 1.0), c(-0.5), c(-0.55), Complex(0.025, 0.025)),
                 {"d", -0.15, 0.25, 1001}});
    v.push_back({"fig2e-h", "single EP, complex coupling, width sweep",
                 build_two_level(c(0.55), c(0.5), c(-0.5), c(0.0, -0.5), Complex(0.025, 0.025)),
                 {"a", 0.4, 1.6, 1001}});
    v.push_back({"fig3a-d", "balanced loss and gain, real spectrum between the EPs",
                 build_two_level(c(0.5), c(0.5), c(0.0, 0.05), c(0.0, -0.05), Complex(0.05, 0.0)),
                 {"a", -3.0, 3.0, 1001}});
    v.push_back({"fig3e-h", "loss and gain with complex coupling",
                 build_two_level(c(0.55), c(0.5), c(0.0, 0.05), c(0.0, -0.05), Complex(0.025, 0.025)),
                 {"a", -1.5, 1.5, 1001}});
    v.push_back({"fig4a-e", "almost imaginary coupling, mixing panel",
                 build_two_level(c(0.5), c(0.0, 1.0), c(-0.05), c(-0.06), Complex(0.005, 0.05)),
                 {"a", 0.2, 1.0, 1001}});
    v.push_back({"fig4f-j", "almost real coupling, mixing panel",
                 build_two_level(c(0.5), c(0.51), c(-0.5), c(0.0, -0.3), Complex(0.05, 0.005)),
                 {"a", 0.8, 3.2, 1001}});

    v.push_back({"fig5-2lev", "two-level reference for the three-level clustering case",
                 build_two_level(c(1.0, -0.5), c(0.0, 1.0), c(-0.495), c(-0.495), Complex(0.0, 0.01)),
                 {"a", 0.4, 0.95, 1001}});
    v.push_back({"fig5-3lev", "three nearby states, one common continuum (doorway)",
                 build_n_level({c(1.0, -0.5), c(0.0, 1.0), c(-1.0 / 3.0, 1.5)},
                               {c(-0.495), c(-0.495), c(-0.4853)}, Complex(0.0, 0.01)),
                 {"a", 0.4, 0.95, 1001}});
    v.push_back({"fig6-2lev", "two-level reference, complex coupling",
                 build_two_level(c(0.5), c(0.0, 1.0), c(-0.5), c(-0.51), Complex(0.005, 0.005)),
                 {"a", 0.4, 0.95, 1001}});
    v.push_back({"fig6-3lev", "three-level clustering, complex coupling",
                 build_n_level({c(0.5), c(0.0, 1.0), c(-0.5, 2.0)},
                               {c(-0.5), c(-0.505), c(-0.51)}, Complex(0.005, 0.005)),
                 {"a", 0.4, 0.95, 1001}});
    v.push_back({"fig7-4lev-imag", "four-level clustering, imaginary coupling",
                 build_n_level({c(1.0, -0.5), c(0.0, 1.0), c(-1.0 / 3.0, 1.5), c(third2)},
                               {c(-0.495), c(-0.495), c(-0.4853), c(-0.495)}, Complex(0.0, 0.01)),
                 {"a", 0.4, 0.95, 1001}});
    v.push_back({"fig7-4lev-complex", "four-level clustering, complex coupling",
                 build_n_level({c(0.5), c(0.0, 1.0), c(-0.5, 2.0), c(1.0, -1.0)},
                               {c(-0.5), c(-0.505), c(-0.51), c(-0.505)}, Complex(0.005, 0.005)),
                 {"a", 0.4, 0.95, 1001}});
    return v;
}

}  // namespace

std::string to_string(Topology t) {
    return t == Topology::FullTwoLevel ? "full-2x2" : "doorway";
}

Topology topology_from_string(const std::string& s) {
    if (s == "full-2x2") return Topology::FullTwoLevel;
    if (s == "doorway") return Topology::Doorway;
    throw std::invalid_argument("unknown topology '" + s + "' (expected full-2x2 or doorway)");
}

Complex HamiltonianMatrix::trace() const {
    Complex t{0.0, 0.0};
    for (int i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
}

double HamiltonianMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& z : a_) m = std::max(m, std::abs(z));
    return m;
}

HamiltonianSpec build_two_level(ParamCurve e1, ParamCurve e2,
                                ParamCurve g1, ParamCurve g2, Complex omega) {
    HamiltonianSpec spec;
    spec.n = 2;
    spec.energy = {e1, e2};
    spec.halfwidth = {g1, g2};
    spec.omega = omega;
    spec.topology = Topology::FullTwoLevel;
    validate(spec);
    return spec;
}

HamiltonianSpec build_n_level(std::vector<ParamCurve> energies,
                              std::vector<ParamCurve> halfwidths, Complex omega) {
    HamiltonianSpec spec;
    spec.n = static_cast<int>(energies.size());
    if (spec.n < 2) throw std::invalid_argument("doorway model requires n >= 2 states");
    if (halfwidths.size() != energies.size())
        throw std::invalid_argument("energy and half-width curve counts differ");
    spec.energy = std::move(energies);
    spec.halfwidth = std::move(halfwidths);
    spec.omega = omega;
    spec.topology = Topology::Doorway;
    validate(spec);
    return spec;
}

HamiltonianMatrix eval_at(const HamiltonianSpec& spec, double a) {
    validate(spec);
    if (!finite(a)) throw std::invalid_argument("non-finite sweep parameter");

    HamiltonianMatrix m(spec.n);
    for (int i = 0; i < spec.n; ++i)
        m(i, i) = Complex(spec.energy[i].value(a), spec.halfwidth[i].value(a));

    if (spec.topology == Topology::FullTwoLevel) {
        m.set_sym(0, 1, spec.omega);
    } else {
        for (int j = 1; j < spec.n; ++j) m.set_sym(0, j, spec.omega);
    }
    return m;
}

const std::vector<Preset>& preset_catalog() {
    static const std::vector<Preset> catalog = make_catalog();
    return catalog;
}

std::vector<std::string> preset_ids() {
    std::vector<std::string> ids;
    for (const auto& p : preset_catalog()) ids.push_back(p.id);
    return ids;
}

const Preset& preset(const std::string& id) {
    for (const auto& p : preset_catalog())
        if (p.id == id) return p;
    std::ostringstream os;
    os << "unknown preset '" << id << "'; valid ids:";
    for (const auto& p : preset_catalog()) os << " " << p.id;
    throw std::invalid_argument(os.str());
}

}  // namespace epsweep
