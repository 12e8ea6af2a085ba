// config.hpp — the line-based key-value document used for model configs,
// EP-report sidecars and sweep manifests.
//
// Grammar: one `key = value` pair per line; '#' starts a comment; blank lines
// ignored. Dotted keys form the tree (state.1.e_intercept = 0.5). Parsing
// keeps line numbers so malformed input reports the offending line and field.

#pragma once

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "epsweep/model.hpp"

namespace epsweep {

struct ConfigError : std::runtime_error {
    int line;          // 0 when not tied to a source line
    std::string key;
    ConfigError(const std::string& what, int line_, std::string key_)
        : std::runtime_error(what), line(line_), key(std::move(key_)) {}
};

class KvDocument {
public:
    void set(const std::string& key, const std::string& value);
    void set(const std::string& key, double value);
    void set(const std::string& key, int value);

    bool has(const std::string& key) const;
    const std::string& require_string(const std::string& key) const;
    double require_double(const std::string& key) const;
    int require_int(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;

    static KvDocument parse(std::istream& is);
    static KvDocument parse_file(const std::string& path);
    void serialize(std::ostream& os) const;

    const std::vector<std::pair<std::string, std::string>>& entries() const { return order_; }

private:
    std::vector<std::pair<std::string, std::string>> order_;  // insertion order
    std::map<std::string, std::pair<std::string, int>> map_;  // key -> (value, line)
};

struct ModelConfig {
    HamiltonianSpec spec;
    SweepAxis axis;
};

// Schema: n, topology, omega_re, omega_im, state.<k>.{e_intercept, e_slope,
// g2_intercept, g2_slope} for k = 1..n, sweep.{axis_name, min, max, points}.
KvDocument model_to_config(const HamiltonianSpec& spec, const SweepAxis& axis);
ModelConfig config_to_model(const KvDocument& doc);

ModelConfig load_model_file(const std::string& path);
void save_model_file(const std::string& path, const HamiltonianSpec& spec, const SweepAxis& axis);

}  // namespace epsweep
