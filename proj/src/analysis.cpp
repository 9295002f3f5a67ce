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

#include "qdgate/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <ostream>

#include <fftw3.h>

#include "qdgate/error.hpp"
#include "qdgate/io.hpp"

namespace qdgate {

namespace {

constexpr double kValidFraction = 1e-3;

// FFTW planning is not thread-safe; execution of distinct plans is.
std::mutex &fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwBuffer {
    explicit FftwBuffer(std::size_t n)
        : data(reinterpret_cast<fftw_complex *>(fftw_malloc(sizeof(fftw_complex) * n))) {
        std::fill(reinterpret_cast<cplx *>(data), reinterpret_cast<cplx *>(data) + n,
                  cplx{0.0, 0.0});
    }
    ~FftwBuffer() {
        fftw_free(data);
    }
    FftwBuffer(const FftwBuffer &) = delete;
    FftwBuffer &operator=(const FftwBuffer &) = delete;

    cplx *values() {
        return reinterpret_cast<cplx *>(data);
    }

    fftw_complex *data;
};

struct FftwPlan {
    FftwPlan(std::size_t n, FftwBuffer &buf, int sign) {
        std::lock_guard lock(fftw_planner_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(n), buf.data, buf.data, sign, FFTW_ESTIMATE);
    }
    ~FftwPlan() {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    FftwPlan(const FftwPlan &) = delete;
    FftwPlan &operator=(const FftwPlan &) = delete;

    void run() const {
        fftw_execute(plan);
    }

    fftw_plan plan;
};

std::size_t fft_size(std::size_t n) {
    // Sizes of the form 2^a 3^b 5^c are fast.
    for (std::size_t m = n;; ++m) {
        std::size_t r = m;
        for (std::size_t p : {2u, 3u, 5u}) {
            while (r % p == 0) {
                r /= p;
            }
        }
        if (r == 1) {
            return m;
        }
    }
}

/// Index offset of f_out's grid relative to f_in's, in samples.
long aligned_offset(const Envelope &f_in, const Envelope &f_out) {
    const double dt = f_in.times.step;
    if (std::abs(f_out.times.step - dt) > 1e-12 * dt) {
        throw Error(ErrorKind::kInvalidArgument, "envelopes must share the time step");
    }
    const double shift = (f_out.times.start - f_in.times.start) / dt;
    const double rounded = std::round(shift);
    if (std::abs(shift - rounded) > 1e-6) {
        throw Error(ErrorKind::kInvalidArgument, "envelope time grids are not sample-aligned");
    }
    return static_cast<long>(rounded);
}

cplx interpolate(const Envelope &env, double t) {
    const double x = (t - env.times.start) / env.times.step;
    if (x < 0.0 || x > static_cast<double>(env.values.size() - 1)) {
        return {0.0, 0.0};
    }
    const auto i = static_cast<std::size_t>(std::floor(x));
    if (i + 1 >= env.values.size()) {
        return env.values.back();
    }
    const double frac = x - static_cast<double>(i);
    return (1.0 - frac) * env.values[i] + frac * env.values[i + 1];
}

}  // namespace

FidelityReport fidelity(const Envelope &f_in, const Envelope &f_out) {
    const double in_norm = f_in.norm();
    if (!(in_norm > 0.0)) {
        throw Error(ErrorKind::kInvalidArgument, "fidelity needs a nonzero input envelope");
    }
    const long offset = aligned_offset(f_in, f_out);
    const double dt = f_in.times.step;

    // Restrict f_in to its support.
    std::size_t first = f_in.values.size(), last = 0;
    for (std::size_t i = 0; i < f_in.values.size(); ++i) {
        if (f_in.values[i] != cplx{0.0, 0.0}) {
            first = std::min(first, i);
            last = i;
        }
    }
    const std::size_t n_a = last - first + 1;
    const std::size_t n_b = f_out.values.size();
    if (n_b == 0) {
        return {};
    }

    // c[l] = sum_j conj(a_j) b_{j + l} for l in [-(n_a - 1), n_b - 1], via
    // IFFT(conj(FFT a) * FFT b) with zero padding against wrap-around.
    const std::size_t n = fft_size(n_a + n_b - 1);
    FftwBuffer a(n), b(n);
    std::copy(f_in.values.begin() + static_cast<long>(first),
              f_in.values.begin() + static_cast<long>(last + 1), a.values());
    std::copy(f_out.values.begin(), f_out.values.end(), b.values());
    {
        FftwPlan fa(n, a, FFTW_FORWARD);
        FftwPlan fb(n, b, FFTW_FORWARD);
        fa.run();
        fb.run();
    }
    cplx *av = a.values();
    cplx *bv = b.values();
    for (std::size_t k = 0; k < n; ++k) {
        bv[k] = std::conj(av[k]) * bv[k];
    }
    {
        FftwPlan back(n, b, FFTW_BACKWARD);
        back.run();
    }
    const double scale = dt / (static_cast<double>(n) * std::sqrt(in_norm));
    auto corr = [&](long l) -> cplx {
        if (l < -static_cast<long>(n_a - 1) || l > static_cast<long>(n_b - 1)) {
            return {0.0, 0.0};
        }
        const std::size_t idx = l >= 0 ? static_cast<std::size_t>(l)
                                       : n - static_cast<std::size_t>(-l);
        return bv[idx] * scale;
    };

    long best = 0;
    double best_abs = -1.0;
    for (long l = -static_cast<long>(n_a - 1); l <= static_cast<long>(n_b - 1); ++l) {
        const double v = std::abs(corr(l));
        if (v > best_abs) {
            best_abs = v;
            best = l;
        }
    }

    const cplx c_minus = corr(best - 1), c0 = corr(best), c_plus = corr(best + 1);
    const double y_minus = std::abs(c_minus), y0 = std::abs(c0), y_plus = std::abs(c_plus);
    const double curvature = y_minus - 2.0 * y0 + y_plus;
    double delta = 0.0;
    if (curvature < 0.0) {
        delta = std::clamp(0.5 * (y_minus - y_plus) / curvature, -0.5, 0.5);
    }
    const cplx refined =
        c0 + 0.5 * delta * (c_plus - c_minus) + 0.5 * delta * delta * (c_plus - 2.0 * c0 + c_minus);

    // b index j + l sits (l + offset - first) samples after f_in index first + j.
    const double tau =
        (static_cast<double>(best + offset) - static_cast<double>(first) + delta) * dt;
    FidelityReport report;
    report.overlap_amplitude = refined;
    report.value = std::abs(refined);
    report.optimal_delay = tau;
    return report;
}

double aggregate_phase(const Envelope &f_in, const Envelope &f_out) {
    const FidelityReport report = fidelity(f_in, f_out);
    if (report.value < 1e-12) {
        throw Error(ErrorKind::kUndefinedPhase, "overlap vanishes; phase undefined");
    }
    return wrap_phase(std::arg(report.overlap_amplitude));
}

PhaseProfile phase_profile(const Envelope &f_in, const Envelope &f_out, double tau) {
    const double threshold = kValidFraction * f_in.peak_abs();
    PhaseProfile profile;
    double previous = 0.0;
    double best_ref = -1.0;
    std::size_t ref_index = 0;
    for (std::size_t i = 0; i < f_out.values.size(); ++i) {
        const double t = f_out.times.at(i);
        const cplx reference = interpolate(f_in, t - tau);
        if (!(std::abs(reference) > threshold) || f_out.values[i] == cplx{0.0, 0.0}) {
            continue;
        }
        const double raw = std::arg(f_out.values[i]) - std::arg(reference);
        double value = raw;
        if (!profile.phase.empty()) {
            // Nearest branch to the previous valid sample.
            value = previous + std::remainder(raw - previous, 2.0 * std::numbers::pi);
        }
        if (std::abs(reference) > best_ref) {
            best_ref = std::abs(reference);
            ref_index = profile.phase.size();
        }
        profile.times.push_back(t);
        profile.phase.push_back(value);
        previous = value;
    }
    if (profile.phase.empty()) {
        throw Error(ErrorKind::kUndefinedPhase, "phase profile has an empty valid region");
    }
    const double shift = wrap_phase(profile.phase[ref_index]) - profile.phase[ref_index];
    for (double &p : profile.phase) {
        p += shift;
    }
    return profile;
}

void write_phase_csv(std::ostream &out, const PhaseProfile &profile) {
    out << "t,phase\n";
    for (std::size_t i = 0; i < profile.times.size(); ++i) {
        out << format_number(profile.times[i]) << ',' << format_number(profile.phase[i]) << '\n';
    }
}

cplx reflection_oracle(double omega, const SystemParams &params, QdMode mode) {
    const cplx i{0.0, 1.0};
    const double K = params.energy_decay_rate();
    const cplx cavity = 0.5 * K + i * (params.delta_cav - omega);
    if (mode == QdMode::kDecoupled) {
        return 1.0 - K / cavity;
    }
    // Multiplied through by (gamma + i(D_qd - omega)) so the exact QD
    // resonance at gamma = 0 stays finite.
    const double delta_qd = mode == QdMode::kResonantTwoLevel ? 0.0 : params.delta_bind;
    const cplx emitter = params.gamma + i * (delta_qd - omega);
    return 1.0 - K * emitter / (cavity * emitter + params.g * params.g);
}

}  // namespace qdgate
