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

#include "qdgate/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "qdgate/error.hpp"
#include "qdgate/io.hpp"

namespace qdgate {

unsigned default_threads() {
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)> &body) {
    const std::size_t workers = std::min<std::size_t>(std::max(1u, threads), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            body(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back(worker);
    }
    pool.clear();
    if (failure) {
        std::rethrow_exception(failure);
    }
}

StateFidelities state_fidelities(const std::array<ScenarioResult, 4> &results) {
    StateFidelities f{};
    for (std::size_t i = 0; i < 4; ++i) {
        f[i] = results[i].state_fidelity();
    }
    return f;
}

SweepResult gamma_sweep(const GateScenario &base, const std::vector<double> &ratios,
                        unsigned threads) {
    if (ratios.empty()) {
        throw Error(ErrorKind::kInvalidArgument, "gamma sweep needs at least one ratio");
    }
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        if (!(ratios[i] >= 0.0) || (i > 0 && !(ratios[i] > ratios[i - 1]))) {
            throw Error(ErrorKind::kInvalidArgument,
                        "gamma/kappa ratios must be non-negative and strictly increasing");
        }
    }
    SweepResult sweep;
    sweep.axis = ratios;
    sweep.fidelities.resize(ratios.size());
    parallel_for(ratios.size(), threads, [&](std::size_t i) {
        GateScenario scenario = base;
        scenario.params.gamma = ratios[i] * base.params.kappa;
        sweep.fidelities[i] = state_fidelities(run_all_states(scenario));
    });
    return sweep;
}

void write_sweep_csv(std::ostream &out, const SweepResult &sweep) {
    out << "gamma_over_kappa,F_aa,F_ab,F_ba,F_bb\n";
    for (std::size_t i = 0; i < sweep.axis.size(); ++i) {
        out << format_number(sweep.axis[i]);
        for (double f : sweep.fidelities[i]) {
            out << ',' << format_number(f);
        }
        out << '\n';
    }
}

ConvergenceTable convergence_check(const GateScenario &base, const std::vector<std::size_t> &n_list,
                                   const std::vector<double> &dt_list, unsigned threads) {
    if (n_list.empty() || dt_list.empty()) {
        throw Error(ErrorKind::kInvalidArgument, "convergence check needs grids and steps");
    }
    for (std::size_t n : n_list) {
        if (n < 2) {
            throw Error(ErrorKind::kInvalidArgument, "grid sizes must be >= 2");
        }
    }
    for (double dt : dt_list) {
        if (!(dt > 0.0)) {
            throw Error(ErrorKind::kInvalidArgument, "time steps must be positive");
        }
    }

    ConvergenceTable table;
    for (std::size_t n : n_list) {
        for (double dt : dt_list) {
            table.rows.push_back({n, dt, {}, 0.0});
        }
    }
    parallel_for(table.rows.size(), threads, [&](std::size_t i) {
        GateScenario scenario = base;
        scenario.numerics.n_modes = table.rows[i].n_modes;
        scenario.numerics.dt = table.rows[i].dt;
        table.rows[i].fidelities = state_fidelities(run_all_states(scenario));
    });

    const std::size_t n_best = *std::max_element(n_list.begin(), n_list.end());
    const double dt_best = *std::min_element(dt_list.begin(), dt_list.end());
    const auto finest = std::find_if(table.rows.begin(), table.rows.end(), [&](const auto &r) {
        return r.n_modes == n_best && r.dt == dt_best;
    });
    for (ConvergenceRow &row : table.rows) {
        row.deviation = 0.0;
        for (std::size_t s = 0; s < 4; ++s) {
            row.deviation =
                std::max(row.deviation, std::abs(row.fidelities[s] - finest->fidelities[s]));
        }
        table.max_deviation = std::max(table.max_deviation, row.deviation);
    }
    return table;
}

void write_convergence_csv(std::ostream &out, const ConvergenceTable &table) {
    out << "n_modes,dt,F_aa,F_ab,F_ba,F_bb,deviation\n";
    for (const ConvergenceRow &row : table.rows) {
        out << row.n_modes << ',' << format_number(row.dt);
        for (double f : row.fidelities) {
            out << ',' << format_number(f);
        }
        out << ',' << format_number(row.deviation) << '\n';
    }
}

}  // namespace qdgate
