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

// qdgate run|sweep|converge. Exit codes: 0 ok, 2 usage, 3 validation,
// 4 numerical (bandwidth or step-size limits).

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qdgate/config.hpp"
#include "qdgate/error.hpp"
#include "qdgate/io.hpp"
#include "qdgate/report.hpp"
#include "qdgate/sweep.hpp"

namespace fs = std::filesystem;
using namespace qdgate;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitValidation = 3;
constexpr int kExitNumerical = 4;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string &text) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        const auto a = item.find_first_not_of(" \t");
        const auto b = item.find_last_not_of(" \t");
        if (a == std::string::npos) {
            throw UsageError("empty entry in list '" + text + "'");
        }
        parts.push_back(item.substr(a, b - a + 1));
    }
    if (parts.empty()) {
        throw UsageError("empty list");
    }
    return parts;
}

template <typename T>
std::vector<T> parse_list(const std::string &flag, const std::string &text) {
    std::vector<T> values;
    for (const std::string &s : split(text)) {
        T v{};
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size()) {
            throw UsageError(flag + ": cannot parse '" + s + "'");
        }
        values.push_back(v);
    }
    return values;
}

template <typename Fn>
void write_file(const fs::path &path, Fn &&fn) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    fn(out);
    if (!out) {
        throw std::runtime_error("write failed for " + path.string());
    }
}

RunConfig load(const std::string &config_path) {
    if (config_path.empty()) {
        RunConfig config;
        config.validate();
        return config;
    }
    return load_config(config_path);
}

void write_scenario_files(const fs::path &dir, const ScenarioResult &r) {
    const std::string s(to_string(r.input_state()));
    for (const NamedTrajectory &t : r.trajectories) {
        write_file(dir / ("trajectory_" + s + "_" + t.name + ".csv"),
                   [&](std::ostream &o) { write_trajectory_csv(o, t.trajectory); });
    }
    auto envelopes = [&](const std::string &photon, const std::optional<Envelope> &in,
                         const std::optional<Envelope> &out, double delay) {
        if (!in || !out) {
            return;
        }
        write_file(dir / ("envelope_" + s + "_" + photon + "_in.csv"),
                   [&](std::ostream &o) { write_envelope_csv(o, *in); });
        write_file(dir / ("envelope_" + s + "_" + photon + "_out.csv"),
                   [&](std::ostream &o) { write_envelope_csv(o, *out); });
        write_file(dir / ("phase_" + s + "_" + photon + ".csv"), [&](std::ostream &o) {
            write_phase_csv(o, phase_profile(*in, *out, delay));
        });
    };
    envelopes("photon1", r.photon1_in, r.photon1_out, r.delay1);
    envelopes("photon2", r.photon2_in, r.photon2_out, r.delay2);
    write_file(dir / ("scenario_" + s + ".json"),
               [&](std::ostream &o) { write_scenario_json(o, r); });
}

int cmd_run(const RunConfig &config, const fs::path &dir) {
    const GateScenario scenario = make_scenario(config);
    fs::create_directories(dir);
    if (config.state == "all") {
        const auto results = run_all_states(scenario);
        for (const ScenarioResult &r : results) {
            write_scenario_files(dir, r);
        }
        const GateMatrix gate = assemble_gate_matrix(results);
        write_file(dir / "gate.json", [&](std::ostream &o) { write_gate_json(o, gate); });
        for (const ScenarioResult &r : results) {
            std::cout << to_string(r.input_state()) << " F=" << format_number(r.state_fidelity())
                      << '\n';
        }
        std::cout << "match=" << format_number(gate.match()) << '\n';
    } else {
        const ScenarioResult r = run_scenario(scenario);
        write_scenario_files(dir, r);
        std::cout << to_string(r.input_state()) << " F=" << format_number(r.state_fidelity())
                  << '\n';
    }
    return kExitOk;
}

int cmd_sweep(const RunConfig &config, const fs::path &dir, const std::string &ratios_text) {
    const auto ratios = parse_list<double>("--ratios", ratios_text);
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        if (!(ratios[i] >= 0.0) || (i > 0 && !(ratios[i] > ratios[i - 1]))) {
            throw UsageError("--ratios must be non-negative and strictly increasing");
        }
    }
    const GateScenario scenario = make_scenario(config);
    const SweepResult sweep = gamma_sweep(scenario, ratios);
    fs::create_directories(dir);
    write_file(dir / "sweep.csv", [&](std::ostream &o) { write_sweep_csv(o, sweep); });
    write_sweep_csv(std::cout, sweep);
    return kExitOk;
}

int cmd_converge(const RunConfig &config, const fs::path &dir, const std::string &grids_text,
                 const std::string &steps_text) {
    std::vector<std::size_t> grids{config.numerics.n_modes, 2 * config.numerics.n_modes};
    std::vector<double> steps{config.numerics.dt, config.numerics.dt / 2.0};
    if (!grids_text.empty()) {
        grids.clear();
        for (long long n : parse_list<long long>("--grids", grids_text)) {
            if (n < 2) {
                throw UsageError("--grids entries must be >= 2");
            }
            grids.push_back(static_cast<std::size_t>(n));
        }
    }
    if (!steps_text.empty()) {
        steps = parse_list<double>("--steps", steps_text);
        for (double dt : steps) {
            if (!(dt > 0.0)) {
                throw UsageError("--steps entries must be positive");
            }
        }
    }
    const GateScenario scenario = make_scenario(config);
    const ConvergenceTable table = convergence_check(scenario, grids, steps);
    fs::create_directories(dir);
    write_file(dir / "convergence.csv",
               [&](std::ostream &o) { write_convergence_csv(o, table); });
    write_convergence_csv(std::cout, table);
    std::cout << "max_deviation=" << format_number(table.max_deviation) << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Two-photon phase gate simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string state;
    std::string ratios;
    std::string grids;
    std::string steps;

    auto add_common = [&](CLI::App *sub) {
        sub->add_option("--config", config_path, "INI config file (defaults when omitted)")
            ->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "Output directory (overrides [run] out)");
    };
    CLI::App *run = app.add_subcommand("run", "Run one or all basis states");
    add_common(run);
    run->add_option("--state", state, "aa|ab|ba|bb|all (overrides [run] state)")
        ->check(CLI::IsMember({"aa", "ab", "ba", "bb", "all"}));
    CLI::App *sweep = app.add_subcommand("sweep", "Fidelities versus gamma/kappa");
    add_common(sweep);
    sweep->add_option("--ratios", ratios, "Comma-separated gamma/kappa values")->required();
    CLI::App *converge = app.add_subcommand("converge", "Grid and step refinement table");
    add_common(converge);
    converge->add_option("--grids", grids, "Comma-separated mode counts");
    converge->add_option("--steps", steps, "Comma-separated time steps");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        RunConfig config = load(config_path);
        if (!state.empty()) {
            config.state = state;
        }
        const fs::path dir = out_dir.empty() ? fs::path(config.output_dir) : fs::path(out_dir);
        if (run->parsed()) {
            return cmd_run(config, dir);
        }
        if (sweep->parsed()) {
            return cmd_sweep(config, dir, ratios);
        }
        return cmd_converge(config, dir, grids, steps);
    } catch (const UsageError &e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error &e) {
        std::cerr << e.what() << '\n';
        return is_numerical(e.kind()) ? kExitNumerical : kExitValidation;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
