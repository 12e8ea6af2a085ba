#include "epsweep/config.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "epsweep/sweep.hpp"

namespace epsweep {

namespace {

std::string trim(const std::string& s) {
    const size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

void KvDocument::set(const std::string& key, const std::string& value) {
    auto it = map_.find(key);
    if (it == map_.end()) {
        order_.emplace_back(key, value);
        map_[key] = {value, 0};
    } else {
        it->second.first = value;
        for (auto& [k, v] : order_)
            if (k == key) v = value;
    }
}

void KvDocument::set(const std::string& key, double value) { set(key, format_double(value)); }

void KvDocument::set(const std::string& key, int value) { set(key, std::to_string(value)); }

bool KvDocument::has(const std::string& key) const { return map_.count(key) != 0; }

const std::string& KvDocument::require_string(const std::string& key) const {
    auto it = map_.find(key);
    if (it == map_.end()) throw ConfigError("missing required field '" + key + "'", 0, key);
    return it->second.first;
}

double KvDocument::require_double(const std::string& key) const {
    auto it = map_.find(key);
    if (it == map_.end()) throw ConfigError("missing required field '" + key + "'", 0, key);
    const std::string& s = it->second.first;
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0' || errno == ERANGE)
        throw ConfigError("field '" + key + "' is not a number: '" + s + "'", it->second.second, key);
    return v;
}

int KvDocument::require_int(const std::string& key) const {
    const double v = require_double(key);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v) {
        auto it = map_.find(key);
        throw ConfigError("field '" + key + "' is not an integer", it->second.second, key);
    }
    return i;
}

double KvDocument::get_double(const std::string& key, double fallback) const {
    return has(key) ? require_double(key) : fallback;
}

KvDocument KvDocument::parse(std::istream& is) {
    KvDocument doc;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value', got '" +
                                  stripped + "'",
                              lineno, "");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key", lineno, "");
        doc.order_.emplace_back(key, value);
        doc.map_[key] = {value, lineno};
    }
    return doc;
}

KvDocument KvDocument::parse_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file '" + path + "'", 0, "");
    return parse(f);
}

void KvDocument::serialize(std::ostream& os) const {
    for (const auto& [k, v] : order_) os << k << " = " << v << '\n';
}

KvDocument model_to_config(const HamiltonianSpec& spec, const SweepAxis& axis) {
    KvDocument doc;
    doc.set("n", spec.n);
    doc.set("topology", to_string(spec.topology));
    doc.set("omega_re", spec.omega.real());
    doc.set("omega_im", spec.omega.imag());
    for (int i = 0; i < spec.n; ++i) {
        const std::string p = "state." + std::to_string(i + 1) + ".";
        doc.set(p + "e_intercept", spec.energy[i].intercept);
        doc.set(p + "e_slope", spec.energy[i].slope);
        doc.set(p + "g2_intercept", spec.halfwidth[i].intercept);
        doc.set(p + "g2_slope", spec.halfwidth[i].slope);
    }
    doc.set("sweep.axis_name", axis.name);
    doc.set("sweep.min", axis.min);
    doc.set("sweep.max", axis.max);
    doc.set("sweep.points", axis.points);
    return doc;
}

ModelConfig config_to_model(const KvDocument& doc) {
    ModelConfig out;
    const int n = doc.require_int("n");
    if (n < 2) throw ConfigError("field 'n' must be >= 2", 0, "n");

    std::vector<ParamCurve> energy, halfwidth;
    for (int i = 1; i <= n; ++i) {
        const std::string p = "state." + std::to_string(i) + ".";
        energy.push_back({doc.require_double(p + "e_intercept"), doc.require_double(p + "e_slope")});
        halfwidth.push_back(
            {doc.require_double(p + "g2_intercept"), doc.require_double(p + "g2_slope")});
    }
    const Complex omega(doc.require_double("omega_re"), doc.require_double("omega_im"));

    Topology topo = n == 2 ? Topology::FullTwoLevel : Topology::Doorway;
    if (doc.has("topology")) {
        try {
            topo = topology_from_string(doc.require_string("topology"));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what(), 0, "topology");
        }
    }

    try {
        if (topo == Topology::FullTwoLevel) {
            if (n != 2) throw ConfigError("topology full-2x2 requires n = 2", 0, "topology");
            out.spec = build_two_level(energy[0], energy[1], halfwidth[0], halfwidth[1], omega);
        } else {
            out.spec = build_n_level(std::move(energy), std::move(halfwidth), omega);
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what(), 0, "");
    }

    out.axis.name = doc.has("sweep.axis_name") ? doc.require_string("sweep.axis_name") : "a";
    out.axis.min = doc.require_double("sweep.min");
    out.axis.max = doc.require_double("sweep.max");
    out.axis.points = doc.has("sweep.points") ? doc.require_int("sweep.points") : 1001;
    if (!(out.axis.min < out.axis.max))
        throw ConfigError("sweep.min must be strictly below sweep.max", 0, "sweep.min");
    if (out.axis.points < 3) throw ConfigError("sweep.points must be >= 3", 0, "sweep.points");
    return out;
}

ModelConfig load_model_file(const std::string& path) {
    return config_to_model(KvDocument::parse_file(path));
}

void save_model_file(const std::string& path, const HamiltonianSpec& spec, const SweepAxis& axis) {
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot write config file '" + path + "'", 0, "");
    model_to_config(spec, axis).serialize(f);
}

}  // namespace epsweep
