// Copyright 2026 The qdgate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qdgate/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "qdgate/error.hpp"

namespace qdgate {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>> &known_keys() {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"params", {"g", "kappa", "gamma", "delta_bind", "delta_cav", "kappa_convention"}},
        {"grid", {"n_modes", "bandwidth"}},
        {"pulses", {"w", "t0_1", "t0_2"}},
        {"schedule", {"T1", "T2", "T_end", "ramp_time"}},
        {"numerics", {"dt", "envelope_dt", "sample_every"}},
        {"options", {"biexciton_coupling_factor", "bare_cavity_model", "residual_model"}},
        {"run", {"state", "out"}},
    };
    return keys;
}

[[noreturn]] void invalid(const std::string &message) {
    throw Error(ErrorKind::kConfigValidation, message);
}

std::string trim(const std::string &s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return "";
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double to_double(const std::string &key, const std::string &raw) {
    const std::string text = trim(raw);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
        invalid(key + ": expected a number, got '" + text + "'");
    }
    return value;
}

std::size_t to_count(const std::string &key, const std::string &raw) {
    const std::string text = trim(raw);
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || value < 0) {
        invalid(key + ": expected a non-negative integer, got '" + text + "'");
    }
    return static_cast<std::size_t>(value);
}

class Reader {
   public:
    explicit Reader(const pt::ptree &tree) : tree_(tree) {
    }

    template <typename Fn>
    void with(const std::string &section, const std::string &key, Fn &&fn) const {
        const auto child = tree_.get_child_optional(pt::ptree::path_type(section + "/" + key, '/'));
        if (child) {
            fn(section + "." + key, child->data());
        }
    }

    void number(const std::string &section, const std::string &key, double &out) const {
        with(section, key, [&](const std::string &name, const std::string &raw) {
            out = to_double(name, raw);
        });
    }

    void number(const std::string &section, const std::string &key,
                std::optional<double> &out) const {
        with(section, key, [&](const std::string &name, const std::string &raw) {
            out = to_double(name, raw);
        });
    }

    void count(const std::string &section, const std::string &key, std::size_t &out) const {
        with(section, key, [&](const std::string &name, const std::string &raw) {
            out = to_count(name, raw);
        });
    }

    void text(const std::string &section, const std::string &key, std::string &out) const {
        with(section, key,
             [&](const std::string &, const std::string &raw) { out = trim(raw); });
    }

   private:
    const pt::ptree &tree_;
};

}  // namespace

void RunConfig::validate() const {
    if (!(params.g > 0.0)) invalid("g > 0 required");
    if (!(params.kappa > 0.0)) invalid("kappa > 0 required");
    if (!(params.gamma >= 0.0)) invalid("gamma >= 0 required");
    if (numerics.n_modes < 2) invalid("n_modes >= 2 required");
    if (!(numerics.bandwidth > 0.0)) invalid("bandwidth > 0 required");
    if (!(width > 0.0)) invalid("w > 0 required");
    if (!(numerics.dt > 0.0)) invalid("dt > 0 required");
    if (!(numerics.envelope_dt > 0.0)) invalid("envelope_dt > 0 required");
    if (numerics.sample_every < 1) invalid("sample_every >= 1 required");
    if (!(ramp_time >= 0.0 && ramp_time < 0.1)) invalid("0 <= ramp_time < 0.1 required");
    if (!(biexciton_coupling_factor > 0.0)) invalid("biexciton_coupling_factor > 0 required");
    if (state != "all") {
        try {
            parse_basis_state(state);
        } catch (const Error &) {
            invalid("state must be one of aa, ab, ba, bb, all");
        }
    }
    if (T1 && T2 && !(*T1 < *T2)) invalid("T1 < T2 required");
    if (T2 && T_end && !(*T2 < *T_end)) invalid("T2 < T_end required");
}

RunConfig parse_config(std::istream &in) {
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error &e) {
        throw Error(ErrorKind::kConfigParse,
                    "line " + std::to_string(e.line()) + ": " + e.message());
    }

    const auto &keys = known_keys();
    for (const auto &[section, body] : tree) {
        const auto it = keys.find(section);
        if (it == keys.end()) {
            if (body.empty()) {
                invalid("unknown top-level key '" + section + "' (keys belong in a [section])");
            }
            invalid("unknown section [" + section + "]");
        }
        for (const auto &entry : body) {
            if (!it->second.contains(entry.first)) {
                invalid("unknown key '" + entry.first + "' in [" + section + "]");
            }
        }
    }

    RunConfig config;
    const Reader r(tree);
    r.number("params", "g", config.params.g);
    r.number("params", "kappa", config.params.kappa);
    r.number("params", "gamma", config.params.gamma);
    r.number("params", "delta_bind", config.params.delta_bind);
    r.number("params", "delta_cav", config.params.delta_cav);
    r.with("params", "kappa_convention", [&](const std::string &name, const std::string &raw) {
        const std::string v = trim(raw);
        if (v == "field") {
            config.params.convention = KappaConvention::kField;
        } else if (v == "energy") {
            config.params.convention = KappaConvention::kEnergy;
        } else {
            invalid(name + " must be 'field' or 'energy'");
        }
    });
    r.count("grid", "n_modes", config.numerics.n_modes);
    r.number("grid", "bandwidth", config.numerics.bandwidth);
    r.number("pulses", "w", config.width);
    r.number("pulses", "t0_1", config.t0_1);
    r.number("pulses", "t0_2", config.t0_2);
    r.with("schedule", "T1", [&](const std::string &name, const std::string &raw) {
        if (trim(raw) != "auto") {
            config.T1 = to_double(name, raw);
        }
    });
    r.number("schedule", "T2", config.T2);
    r.number("schedule", "T_end", config.T_end);
    r.number("schedule", "ramp_time", config.ramp_time);
    r.number("numerics", "dt", config.numerics.dt);
    r.number("numerics", "envelope_dt", config.numerics.envelope_dt);
    r.count("numerics", "sample_every", config.numerics.sample_every);
    r.number("options", "biexciton_coupling_factor", config.biexciton_coupling_factor);
    r.with("options", "bare_cavity_model", [&](const std::string &name, const std::string &raw) {
        const std::string v = trim(raw);
        if (v == "decoupled") {
            config.bare_cavity_model = BareCavityModel::kDecoupled;
        } else if (v == "detuned_exciton") {
            config.bare_cavity_model = BareCavityModel::kDetunedExciton;
        } else {
            invalid(name + " must be 'decoupled' or 'detuned_exciton'");
        }
    });
    r.with("options", "residual_model", [&](const std::string &name, const std::string &raw) {
        const std::string v = trim(raw);
        if (v == "discard") {
            config.residual_model = ResidualModel::kDiscard;
        } else if (v == "amplitude_weighted") {
            config.residual_model = ResidualModel::kAmplitudeWeighted;
        } else {
            invalid(name + " must be 'discard' or 'amplitude_weighted'");
        }
    });
    r.text("run", "state", config.state);
    r.text("run", "out", config.output_dir);

    config.validate();
    return config;
}

RunConfig load_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::kConfigParse, "cannot open config file " + path.string());
    }
    return parse_config(in);
}

GateScenario make_scenario(const RunConfig &config) {
    config.validate();
    const double w = config.width;

    GateScenario s;
    s.input_state = config.state == "all" ? BasisState::kAA : parse_basis_state(config.state);
    s.params = config.params;
    s.numerics = config.numerics;
    s.ramp_time = config.ramp_time;
    s.biexciton_coupling_factor = config.biexciton_coupling_factor;
    s.bare_cavity_model = config.bare_cavity_model;
    s.residual_model = config.residual_model;

    s.photon1_pulse.width = w;
    s.photon1_pulse.t0 = config.t0_1.value_or(6.0 * w);
    const double T1 = config.T1 ? *config.T1
                                : find_storage_time(s.params, s.numerics, s.photon1_pulse);
    s.photon2_pulse.width = w;
    s.photon2_pulse.t0 = config.t0_2.value_or(T1 + 6.0 * w);
    const double T2 = config.T2.value_or(s.photon2_pulse.t0 + 6.0 * std::max(w, 1.0));
    const double T_end = config.T_end.value_or(T2 + 15.0);
    s.times = ProtocolTimes{T1, T2, T_end};
    try {
        s.validate();
    } catch (const Error &e) {
        throw Error(ErrorKind::kConfigValidation, e.what());
    }
    return s;
}

}  // namespace qdgate
