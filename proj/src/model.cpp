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

#include "qdgate/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include <Eigen/Core>

#include "qdgate/error.hpp"
#include "qdgate/io.hpp"

namespace qdgate {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kLeakageThreshold = 1e-4;
constexpr double kGaussianCutoff = 6.0;
// Phase factors advanced by repeated multiplication are recomputed exactly
// this often.
constexpr std::size_t kReseedInterval = 512;

Eigen::ArrayXd detuning_array(const ModeGrid &grid) {
    auto d = grid.detunings();
    return Eigen::Map<const Eigen::ArrayXd>(d.data(), static_cast<Eigen::Index>(d.size()));
}

Eigen::ArrayXcd phase_factors(const Eigen::ArrayXd &detunings, double sign, double s) {
    Eigen::ArrayXcd out(detunings.size());
    for (Eigen::Index k = 0; k < detunings.size(); ++k) {
        out[k] = std::polar(1.0, sign * detunings[k] * s);
    }
    return out;
}

}  // namespace

ModeGrid::ModeGrid(std::size_t n_modes, double bandwidth, double center)
    : bandwidth_(bandwidth), center_(center), spacing_(0.0) {
    if (n_modes < 2) {
        throw Error(ErrorKind::kInvalidArgument, "mode grid needs n_modes >= 2");
    }
    if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
        throw Error(ErrorKind::kInvalidArgument, "mode grid needs bandwidth > 0");
    }
    spacing_ = 2.0 * bandwidth / static_cast<double>(n_modes);
    detunings_.resize(n_modes);
    const double lowest = center - bandwidth;
    for (std::size_t k = 0; k < n_modes; ++k) {
        detunings_[k] = lowest + static_cast<double>(k) * spacing_;
    }
}

double ModeGrid::max_abs_detuning() const {
    return std::max(std::abs(detunings_.front()), std::abs(detunings_.back()));
}

ModeGrid build_mode_grid(std::size_t n_modes, double bandwidth, double center) {
    return ModeGrid(n_modes, bandwidth, center);
}

double derive_kappa_prime(double kappa, double spacing) {
    if (!(kappa > 0.0) || !(spacing > 0.0)) {
        throw Error(ErrorKind::kInvalidArgument, "kappa and spacing must be positive");
    }
    return std::sqrt(kappa * spacing / kTwoPi);
}

void SystemParams::validate() const {
    if (!(g > 0.0)) {
        throw Error(ErrorKind::kInvalidArgument, "g > 0 required");
    }
    if (!(kappa > 0.0)) {
        throw Error(ErrorKind::kInvalidArgument, "kappa > 0 required");
    }
    if (!(gamma >= 0.0)) {
        throw Error(ErrorKind::kInvalidArgument, "gamma >= 0 required");
    }
}

TimeGrid TimeGrid::spanning(double t_begin, double t_end, double step) {
    if (!(step > 0.0) || !(t_end >= t_begin)) {
        throw Error(ErrorKind::kInvalidArgument, "time grid needs step > 0 and end >= begin");
    }
    const auto intervals = static_cast<std::size_t>(std::ceil((t_end - t_begin) / step - 1e-9));
    return TimeGrid{t_begin, step, intervals + 1};
}

double Envelope::norm() const {
    double sum = 0.0;
    for (const auto &v : values) {
        sum += std::norm(v);
    }
    return sum * times.step;
}

double Envelope::peak_abs() const {
    double peak = 0.0;
    for (const auto &v : values) {
        peak = std::max(peak, std::abs(v));
    }
    return peak;
}

Envelope synthesize_gaussian(const PulseSpec &spec, const TimeGrid &times) {
    if (!(spec.width > 0.0)) {
        throw Error(ErrorKind::kInvalidArgument, "pulse width must be positive");
    }
    const double half_span = kGaussianCutoff * spec.width;
    constexpr double slack = 1e-9;
    if (times.start > spec.t0 - half_span + slack || times.end() < spec.t0 + half_span - slack) {
        throw Error(ErrorKind::kInvalidArgument,
                    "time grid does not contain t0 +- 6w; truncation would break normalization");
    }
    const double amplitude = std::pow(std::numbers::pi * spec.width * spec.width, -0.25);
    Envelope env{times, std::vector<cplx>(times.count, cplx{0.0, 0.0})};
    for (std::size_t i = 0; i < times.count; ++i) {
        const double x = times.at(i) - spec.t0;
        if (std::abs(x) > half_span) {
            continue;
        }
        const double magnitude = amplitude * std::exp(-x * x / (2.0 * spec.width * spec.width));
        env.values[i] = std::polar(magnitude, -spec.carrier * times.at(i));
    }
    return env;
}

Envelope synthesize(const PulseSpec &spec, const TimeGrid &times) {
    if (spec.kind == PulseSpec::Kind::kSampled) {
        if (!(spec.samples.times == times)) {
            throw Error(ErrorKind::kInvalidArgument, "sampled pulse is on a different time grid");
        }
        return spec.samples;
    }
    return synthesize_gaussian(spec, times);
}

std::vector<cplx> envelope_to_modes(const Envelope &env, const ModeGrid &grid, double ref_time) {
    const Eigen::ArrayXd detunings = detuning_array(grid);
    const Eigen::Index n = detunings.size();
    Eigen::ArrayXcd beta = Eigen::ArrayXcd::Zero(n);

    // Only the support of the envelope contributes.
    std::size_t first = env.values.size(), last = 0;
    for (std::size_t i = 0; i < env.values.size(); ++i) {
        if (env.values[i] != cplx{0.0, 0.0}) {
            first = std::min(first, i);
            last = i;
        }
    }
    std::vector<cplx> out(static_cast<std::size_t>(n), cplx{0.0, 0.0});
    if (first > last) {
        return out;
    }

    const double dt = env.times.step;
    const Eigen::ArrayXcd step = phase_factors(detunings, +1.0, dt);
    Eigen::ArrayXcd phase;
    for (std::size_t i = first; i <= last; ++i) {
        if ((i - first) % kReseedInterval == 0) {
            phase = phase_factors(detunings, +1.0, env.times.at(i) - ref_time);
        } else {
            phase *= step;
        }
        beta += env.values[i] * phase;
    }
    beta *= std::sqrt(grid.spacing() / kTwoPi) * dt;

    double mode_energy = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        out[static_cast<std::size_t>(k)] = beta[k];
        mode_energy += std::norm(beta[k]);
    }
    const double env_energy = env.norm();
    if (env_energy > 0.0 && std::abs(1.0 - mode_energy / env_energy) > kLeakageThreshold) {
        throw Error(ErrorKind::kBandwidthExceeded,
                    "envelope energy outside the mode bandwidth exceeds 1e-4 (captured fraction " +
                        format_number(mode_energy / env_energy) + ")");
    }
    return out;
}

Envelope modes_to_envelope(std::span<const cplx> beta_k, const ModeGrid &grid, double T,
                           const TimeGrid &times) {
    if (beta_k.size() != grid.n_modes()) {
        throw Error(ErrorKind::kInvalidArgument, "mode amplitude count does not match the grid");
    }
    const Eigen::ArrayXd detunings = detuning_array(grid);
    const Eigen::Map<const Eigen::ArrayXcd> beta(beta_k.data(),
                                                 static_cast<Eigen::Index>(beta_k.size()));
    const double prefactor = std::sqrt(grid.spacing() / kTwoPi);

    Envelope env{times, std::vector<cplx>(times.count, cplx{0.0, 0.0})};
    if ((beta == cplx{0.0, 0.0}).all()) {
        return env;
    }
    const Eigen::ArrayXcd step = phase_factors(detunings, -1.0, times.step);
    Eigen::ArrayXcd phase;
    for (std::size_t i = 0; i < times.count; ++i) {
        if (i % kReseedInterval == 0) {
            phase = phase_factors(detunings, -1.0, times.at(i) - T);
        } else {
            phase *= step;
        }
        env.values[i] = prefactor * (beta * phase).sum();
    }
    return env;
}

void write_envelope_csv(std::ostream &out, const Envelope &env) {
    out << "t,re_f,im_f,abs2_f,phase\n";
    for (std::size_t i = 0; i < env.values.size(); ++i) {
        const cplx f = env.values[i];
        const double phase = (f == cplx{0.0, 0.0}) ? 0.0 : wrap_phase(std::arg(f));
        out << format_number(env.times.at(i)) << ',' << format_number(f.real()) << ','
            << format_number(f.imag()) << ',' << format_number(std::norm(f)) << ','
            << format_number(phase) << '\n';
    }
}

}  // namespace qdgate
