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

// Acceptance checks at the default configuration. Prints one PASS or FAIL
// line per criterion and exits nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "qdgate/config.hpp"
#include "qdgate/report.hpp"
#include "qdgate/sweep.hpp"

using namespace qdgate;

namespace {

constexpr double kPi = std::numbers::pi;

int failures = 0;

void report(bool ok, const std::string &name, const std::string &detail) {
    std::printf("%s  %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

// Runs one criterion; an exception counts as a failure.
void criterion(const std::string &name, const std::function<void()> &body) {
    try {
        body();
    } catch (const std::exception &e) {
        report(false, name, std::string("threw ") + e.what());
    }
}

std::string fmt(const char *pattern, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, pattern, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double distance_to_pi(double phase) {
    return std::abs(std::remainder(phase - kPi, 2 * kPi));
}

GateScenario defaults(BasisState state) {
    RunConfig config;
    config.state = std::string(to_string(state));
    return make_scenario(config);
}

std::string serialize(const std::array<ScenarioResult, 4> &results) {
    std::ostringstream out;
    for (const ScenarioResult &r : results) {
        write_scenario_json(out, r);
        for (const NamedTrajectory &t : r.trajectories) write_trajectory_csv(out, t.trajectory);
        for (const auto *env : {&r.photon1_out, &r.photon2_out}) {
            if (*env) write_envelope_csv(out, **env);
        }
    }
    write_gate_json(out, assemble_gate_matrix(results));
    return out.str();
}

Eigen::VectorXcd as_vector(const ExcitationState &s) {
    Eigen::VectorXcd v(s.modes.size() + 2);
    v << s.alpha, s.beta, s.modes;
    return v;
}

Eigen::MatrixXcd generator(const SystemParams &p, const ModeGrid &grid, double delta_qd) {
    const auto n = static_cast<Eigen::Index>(grid.n_modes());
    const double kp = p.kappa_prime(grid);
    const cplx i{0.0, 1.0};
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n + 2, n + 2);
    a(0, 0) = -i * delta_qd - p.gamma;
    a(0, 1) = p.g;
    a(1, 0) = -p.g;
    a(1, 1) = -i * p.delta_cav;
    for (Eigen::Index k = 0; k < n; ++k) {
        a(1, k + 2) = kp;
        a(k + 2, 1) = -kp;
        a(k + 2, k + 2) = -i * grid.detuning(static_cast<std::size_t>(k));
    }
    return a;
}

}  // namespace

int main() {
    std::array<ScenarioResult, 4> results;
    const GateScenario base = defaults(BasisState::kAA);

    criterion("F(aa) at gamma=0", [&] {
        const auto start = std::chrono::steady_clock::now();
        const ScenarioResult aa = run_scenario(base);
        const double elapsed = seconds_since(start);
        const double f = aa.state_fidelity();
        report(std::abs(f - 0.89) <= 0.02 && elapsed < 120.0, "F(aa) at gamma=0",
               fmt("F=%.4f (target 0.89 +- 0.02, w=%.2f), %.1f s (limit 120 s)", f,
                   base.photon1_pulse.width, elapsed));
        GateScenario weighted = base;
        weighted.residual_model = ResidualModel::kAmplitudeWeighted;
        std::printf("INFO  F(aa) with amplitude-weighted residual: %.4f\n",
                    run_scenario(weighted).state_fidelity());
    });

    criterion("pi phase shift", [&] {
        bool ok = true;
        std::string detail;
        for (double g : {0.5, 1.0, 2.0}) {
            RunConfig config;
            config.state = "ba";
            config.params.g = g;
            config.params.kappa = g;
            config.width = kDefaultPulseWidth / g;
            const ScenarioResult ba = run_scenario(make_scenario(config));
            const double aggregate = distance_to_pi(ba.phase2);

            const PhaseProfile profile = phase_profile(*ba.photon2_in, *ba.photon2_out, ba.delay2);
            const double center = ba.scenario.photon2_pulse.t0 + ba.delay2;
            const double half_width = config.width * std::sqrt(std::log(2.0));
            double flat = 0.0;
            std::size_t samples = 0;
            for (std::size_t i = 0; i < profile.times.size(); ++i) {
                if (std::abs(profile.times[i] - center) <= half_width) {
                    flat = std::max(flat, distance_to_pi(profile.phase[i]));
                    ++samples;
                }
            }
            ok = ok && aggregate <= 0.05 && flat <= 0.05 && samples > 0;
            detail += fmt("g=kappa=%.1f: |phase-pi|=%.2e, FWHM spread %.2e; ", g, aggregate, flat);
        }
        report(ok, "pi phase shift", detail + "limit 0.05 rad");
    });

    criterion("storage efficiency", [&] {
        results = run_all_states(base);
        const double p = *results[0].stored_excitation_prob;
        report(std::abs(p - 0.97) <= 0.03, "storage efficiency",
               fmt("|alpha(T1)|^2=%.4f at T1=%.3f (target 0.97 +- 0.03)", p, base.times.T1));
    });

    criterion("gamma sweep shape", [&] {
        std::vector<double> ratios = {0.0, 0.01};
        for (int i = 1; i <= 10; ++i) ratios.push_back(0.02 * i);
        const SweepResult sweep = gamma_sweep(base, ratios);
        bool monotone = true, aa_lowest = true;
        for (std::size_t i = 0; i < ratios.size(); ++i) {
            const auto &f = sweep.fidelities[i];
            for (std::size_t s = 1; s < 4; ++s) aa_lowest = aa_lowest && f[0] <= f[s];
            if (i > 0) {
                for (std::size_t s = 0; s < 4; ++s) {
                    monotone = monotone && f[s] <= sweep.fidelities[i - 1][s] + 1e-12;
                }
            }
        }
        std::array<double, 4> drop{};
        for (std::size_t s = 0; s < 4; ++s) {
            drop[s] = sweep.fidelities.front()[s] - sweep.fidelities.back()[s];
        }
        const bool steepest = drop[0] >= drop[1] && drop[0] >= drop[2] && drop[0] >= drop[3];
        const double f_aa_001 = sweep.fidelities[1][0];
        report(monotone && aa_lowest && steepest && f_aa_001 >= 0.85, "gamma sweep shape",
               fmt("monotone=%d, aa lowest=%d, aa steepest=%d (drops %.3f %.3f %.3f %.3f), "
                   "F(aa) at 0.01=%.4f (>= 0.85)",
                   monotone, aa_lowest, steepest, drop[0], drop[1], drop[2], drop[3], f_aa_001));
    });

    criterion("norm conservation", [&] {
        double worst = 0.0;
        for (const ScenarioResult &r : results) {
            for (const NamedTrajectory &t : r.trajectories) {
                for (double n : t.trajectory.norm) worst = std::max(worst, std::abs(1.0 - n));
            }
        }
        report(worst < 1e-6, "norm conservation", fmt("max |1 - norm| = %.2e (< 1e-6)", worst));
    });

    criterion("oracle equivalence", [&] {
        const ModeGrid grid = build_mode_grid(2000, 5.0);
        const double w = 20.0, dt = 1e-2, t_end = 12.0 * w + 40.0;
        const TimeGrid times = TimeGrid::spanning(0.0, t_end, dt);
        PulseSpec pulse;
        pulse.t0 = 6.0 * w;
        pulse.width = w;
        const Envelope in = synthesize(pulse, times);
        const auto beta = envelope_to_modes(in, grid, 0.0);
        double worst = 0.0;
        std::string detail;
        for (QdMode mode : {QdMode::kDecoupled, QdMode::kResonantTwoLevel}) {
            for (double gamma : {0.0, 0.1}) {
                SystemParams p;
                p.gamma = gamma;
                const cplx expected = reflection_oracle(0.0, p, mode);
                if (mode == QdMode::kDecoupled) p.g = 0.0;
                const Trajectory t =
                    integrate(ExcitationState::from_modes(beta), p, grid,
                              StarkSchedule::constant(0.0, t_end, 0.0), {0.0, t_end, dt, 100000});
                const Envelope out =
                    modes_to_envelope(t.final_state.mode_vector(), grid, t_end, times);
                const cplx got = fidelity(in, out).overlap_amplitude;
                const double dmag = std::abs(std::abs(got) - std::abs(expected));
                const double dphase = std::abs(std::remainder(std::arg(got) - std::arg(expected), 2 * kPi));
                worst = std::max({worst, dmag, dphase});
                detail += fmt("%s gamma=%.1f: |r| %.4f vs %.4f; ",
                              mode == QdMode::kDecoupled ? "cavity" : "resonant QD", gamma,
                              std::abs(got), std::abs(expected));
            }
        }
        report(worst < 1e-2, "oracle equivalence", detail + fmt("max error %.2e (< 1e-2)", worst));
    });

    criterion("brute-force equivalence", [&] {
        double worst = 0.0;
        for (std::size_t n : {2u, 4u, 8u}) {
            const ModeGrid grid = build_mode_grid(n, 4.0);
            SystemParams p;
            p.gamma = 0.05;
            const std::vector<StarkSchedule::Segment> segs = {{0, 3, 0}, {3, 8, 20}, {8, 12, 0}};
            ExcitationState s = ExcitationState::zero(n);
            s.beta = std::sqrt(0.5);
            for (std::size_t k = 0; k < n; ++k) {
                s.modes[static_cast<Eigen::Index>(k)] = std::polar(std::sqrt(0.5 / n), 0.9 * k);
            }
            const Trajectory t =
                integrate(s, p, grid, StarkSchedule(segs), {0.0, 12.0, 1e-3, 1000});
            Eigen::VectorXcd x = as_vector(s);
            for (const auto &seg : segs) {
                x = (generator(p, grid, seg.delta_qd) * (seg.t_end - seg.t_start)).exp() * x;
            }
            worst = std::max(worst, (as_vector(t.final_state) - x).cwiseAbs().maxCoeff());
        }
        report(worst < 1e-6, "brute-force equivalence",
               fmt("N in {2,4,8}: max amplitude error %.2e (< 1e-6)", worst));
    });

    criterion("convergence", [&] {
        const std::size_t n = base.numerics.n_modes;
        const double dt = base.numerics.dt;
        const ConvergenceTable table = convergence_check(base, {n, 2 * n}, {dt, dt / 2});
        double base_dev = 0.0;
        for (const ConvergenceRow &row : table.rows) {
            if (row.n_modes == n && row.dt == dt) base_dev = row.deviation;
        }
        report(base_dev < 1e-3, "convergence",
               fmt("N=%zu dt=%g vs N=%zu dt=%g: max |dF| = %.2e (< 1e-3)", n, dt, 2 * n, dt / 2,
                   base_dev));
    });

    criterion("gate algebra", [&] {
        GateMatrix ideal;
        ideal.elements = GateMatrix::ideal_target();
        const SuperpositionResult out = apply_to_superposition(ideal);
        const bool exact =
            out.amplitudes == Eigen::Vector4cd(0.5, 0.5, -0.5, 0.5) && out.concurrence == 1.0;
        const GateMatrix measured = assemble_gate_matrix(results);
        const double c = apply_to_superposition(measured).concurrence;
        report(exact && c >= 0.85, "gate algebra",
               fmt("ideal gate gives (1,1,-1,1)/2 with concurrence %.17g; measured concurrence "
                   "%.4f (>= 0.85), match %.4f",
                   out.concurrence, c, measured.match()));
    });

    criterion("determinism", [&] {
        const std::string again = serialize(run_all_states(base));
        const std::string first = serialize(results);
        report(first == again, "determinism",
               fmt("%zu bytes of JSON/CSV output, identical=%d", first.size(), first == again));
    });

    std::printf("%s: %d criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
    return failures == 0 ? 0 : 1;
}
