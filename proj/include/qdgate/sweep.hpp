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

#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <vector>

#include "qdgate/protocol.hpp"

namespace qdgate {

/// Runs body(i) for i in [0, count) on up to `threads` workers. Each index
/// runs exactly once; callers write results by index, so the outcome does
/// not depend on scheduling. The first exception thrown is rethrown.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)> &body);

/// Default worker count (hardware concurrency, at least 1).
unsigned default_threads();

/// State fidelities |gate element| in basis order.
using StateFidelities = std::array<double, 4>;

StateFidelities state_fidelities(const std::array<ScenarioResult, 4> &results);

struct SweepResult {
    /// gamma / kappa
    std::vector<double> axis;
    /// fidelities[i] belongs to axis[i].
    std::vector<StateFidelities> fidelities;
};

/// State fidelities at gamma = ratio * kappa for every ratio; everything else
/// comes from `base`. Ratios must be >= 0 and strictly increasing.
SweepResult gamma_sweep(const GateScenario &base, const std::vector<double> &ratios,
                        unsigned threads = default_threads());

/// Columns gamma_over_kappa, F_aa, F_ab, F_ba, F_bb.
void write_sweep_csv(std::ostream &out, const SweepResult &sweep);

struct ConvergenceRow {
    std::size_t n_modes = 0;
    double dt = 0.0;
    StateFidelities fidelities{};
    /// max over states of |F - F(finest)|
    double deviation = 0.0;
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
    double max_deviation = 0.0;
};

/// State fidelities for every (n_modes, dt) pair at fixed bandwidth and
/// protocol times. The finest grid is the largest n_modes with the smallest dt.
ConvergenceTable convergence_check(const GateScenario &base, const std::vector<std::size_t> &n_list,
                                   const std::vector<double> &dt_list,
                                   unsigned threads = default_threads());

/// Columns n_modes, dt, F_aa, F_ab, F_ba, F_bb, deviation.
void write_convergence_csv(std::ostream &out, const ConvergenceTable &table);

}  // namespace qdgate
