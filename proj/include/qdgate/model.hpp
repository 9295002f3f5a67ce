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

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace qdgate {

using cplx = std::complex<double>;

// All frequencies are in units of the QD-cavity coupling g of the default
// parameter set, all times in units of 1/g.

/// Uniformly spaced waveguide modes on [center - bandwidth, center + bandwidth).
class ModeGrid {
   public:
    ModeGrid(std::size_t n_modes, double bandwidth, double center);

    std::size_t n_modes() const {
        return detunings_.size();
    }
    double bandwidth() const {
        return bandwidth_;
    }
    double center() const {
        return center_;
    }
    double spacing() const {
        return spacing_;
    }
    std::span<const double> detunings() const {
        return detunings_;
    }
    double detuning(std::size_t k) const {
        return detunings_[k];
    }
    /// Largest |detuning| over the grid.
    double max_abs_detuning() const;

   private:
    double bandwidth_;
    double center_;
    double spacing_;
    std::vector<double> detunings_;
};

ModeGrid build_mode_grid(std::size_t n_modes, double bandwidth, double center = 0.0);

/// Cavity-continuum coupling per mode, sqrt(kappa * spacing / 2pi).
double derive_kappa_prime(double kappa, double spacing);

/// How `SystemParams::kappa` is read.
///   kField:  the cavity field amplitude decays at kappa (energy at 2 kappa).
///   kEnergy: the cavity energy decays at kappa (field at kappa / 2).
enum class KappaConvention { kField, kEnergy };

struct SystemParams {
    double g = 1.0;
    double kappa = 1.0;
    double gamma = 0.0;
    double delta_cav = 0.0;
    double delta_bind = 20.0;
    KappaConvention convention = KappaConvention::kField;

    /// Cavity energy decay rate into the waveguide.
    double energy_decay_rate() const {
        return convention == KappaConvention::kField ? 2.0 * kappa : kappa;
    }
    double kappa_prime(const ModeGrid &grid) const {
        return derive_kappa_prime(energy_decay_rate(), grid.spacing());
    }
    /// Throws kInvalidArgument unless g > 0, kappa > 0, gamma >= 0.
    void validate() const;

    bool operator==(const SystemParams &) const = default;
};

/// Uniform sample times t_i = start + i * step, i < count.
struct TimeGrid {
    double start = 0.0;
    double step = 1e-3;
    std::size_t count = 0;

    double at(std::size_t i) const {
        return start + static_cast<double>(i) * step;
    }
    double end() const {
        return count == 0 ? start : at(count - 1);
    }

    static TimeGrid spanning(double t_begin, double t_end, double step);

    bool operator==(const TimeGrid &) const = default;
};

struct Envelope {
    TimeGrid times;
    std::vector<cplx> values;

    /// sum |f|^2 dt
    double norm() const;
    double peak_abs() const;

    bool operator==(const Envelope &) const = default;
};

struct PulseSpec {
    enum class Kind { kGaussian, kSampled };

    Kind kind = Kind::kGaussian;
    double t0 = 6.0;
    double width = 1.0;
    /// Carrier detuning from the rotating frame; the envelope carries exp(-i carrier t).
    double carrier = 0.0;
    /// Used when kind == kSampled.
    Envelope samples;

    bool operator==(const PulseSpec &) const = default;
};

/// Unit-norm Gaussian (pi w^2)^(-1/4) exp(-(t - t0)^2 / 2w^2), zero beyond t0 +- 6w.
Envelope synthesize_gaussian(const PulseSpec &spec, const TimeGrid &times);

/// Gaussian pulses are synthesized; sampled pulses are returned as given.
Envelope synthesize(const PulseSpec &spec, const TimeGrid &times);

/// Mode amplitudes of an envelope referenced to `ref_time`:
///   beta_k = sqrt(dw / 2pi) * sum_i f(t_i) exp(i D_k (t_i - ref_time)) dt.
/// Throws kBandwidthExceeded when more than 1e-4 of the envelope energy
/// falls outside the grid.
std::vector<cplx> envelope_to_modes(const Envelope &env, const ModeGrid &grid, double ref_time);

/// f(t) = sqrt(dw / 2pi) * sum_k beta_k exp(-i D_k (t - T)).
Envelope modes_to_envelope(std::span<const cplx> beta_k, const ModeGrid &grid, double T,
                           const TimeGrid &times);

/// Columns t, re_f, im_f, abs2_f, phase.
void write_envelope_csv(std::ostream &out, const Envelope &env);

}  // namespace qdgate
