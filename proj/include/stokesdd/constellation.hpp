// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The stokesdd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "stokesdd/types.hpp"

#include <cmath>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace stokesdd {

/*
  N_r-ring / N_p-ary PSK alphabet used independently on both polarizations.

  The squared radii are c * (1, 2, ..., N_r). With uniform ring indices on X
  and Y, E[|E_x|^2 + |E_y|^2] = 2 c (N_r + 1) / 2, so c = 1 / (N_r + 1) gives
  unit average symbol energy.

  Four information dimensions per slot:
    1. |E_x[n]|                 ring index rx
    2. |E_y[n]|                 ring index ry
    3. arg(E_x[n] E_y*[n])      phase index t
    4. arg(E_x[n] E_y*[n-1])    phase index e
*/
class RingPskConstellation {
public:
    RingPskConstellation(int n_rings, int n_phases) : n_rings_(n_rings), n_phases_(n_phases) {
        if (n_rings < 1) throw std::invalid_argument("n_rings must be >= 1, got " + std::to_string(n_rings));
        if (n_phases < 1) throw std::invalid_argument("n_phases must be >= 1, got " + std::to_string(n_phases));
        const double c = 1.0 / (n_rings + 1);
        radii_.reserve(static_cast<std::size_t>(n_rings));
        for (int k = 1; k <= n_rings; ++k) radii_.push_back(std::sqrt(c * k));
        phase_step_ = kTwoPi / n_phases;
    }

    int n_rings() const { return n_rings_; }
    int n_phases() const { return n_phases_; }
    double phase_step() const { return phase_step_; }
    const std::vector<double> &radii() const { return radii_; }
    double radius(int ring) const { return radii_.at(static_cast<std::size_t>(ring)); }

    /// Number of (rx, ry, t) hypotheses resolved by the Stokes receiver.
    int n_stokes_hypotheses() const { return n_rings_ * n_rings_ * n_phases_; }

    /// Bits per slot when all four dimensions carry data.
    double bits_per_symbol() const { return std::log2(double(n_rings_) * n_rings_ * n_phases_ * n_phases_); }

    bool valid(const SymbolIndices &s) const {
        return s.rx >= 0 && s.rx < n_rings_ && s.ry >= 0 && s.ry < n_rings_ && s.t >= 0 && s.t < n_phases_ &&
               s.e >= 0 && s.e < n_phases_;
    }

    /// Short label, e.g. "2x4" for 2 rings / 4-PSK.
    std::string id() const { return std::to_string(n_rings_) + "x" + std::to_string(n_phases_); }

private:
    int n_rings_;
    int n_phases_;
    std::vector<double> radii_;
    double phase_step_ = 0.0;
};

inline RingPskConstellation build_constellation(int n_rings, int n_phases) {
    return RingPskConstellation(n_rings, n_phases);
}

/// Uniformly distributed index tuple.
template <std::uniform_random_bit_generator Engine>
SymbolIndices random_indices(const RingPskConstellation &c, Engine &rng) {
    std::uniform_int_distribution<int> ring(0, c.n_rings() - 1);
    std::uniform_int_distribution<int> phase(0, c.n_phases() - 1);
    SymbolIndices s;
    s.rx = ring(rng);
    s.ry = ring(rng);
    s.t = phase(rng);
    s.e = phase(rng);
    return s;
}

/*
  Recursive phase encoder.

    arg E_y[0]  = initial_ey_phase
    arg E_x[n]  = e[n] * step + arg E_y[n-1]      (n >= 1)
    arg E_x[0]  = arg E_y[0] + t[0] * step
    arg E_y[n]  = arg E_x[n] - t[n] * step

  Slot 0 is the reference slot; its e index is ignored.
*/
inline std::vector<DualPolSymbol> encode_sequence(const RingPskConstellation &c, std::span<const SymbolIndices> indices,
                                                  double initial_ey_phase = 0.0) {
    if (indices.empty()) throw std::invalid_argument("encode_sequence: empty index sequence");
    std::vector<DualPolSymbol> out;
    out.reserve(indices.size());
    double prev_ey_phase = initial_ey_phase;
    for (std::size_t n = 0; n < indices.size(); ++n) {
        const auto &s = indices[n];
        if (!c.valid(s)) throw std::out_of_range("encode_sequence: index out of range at slot " + std::to_string(n));
        double ex_phase, ey_phase;
        if (n == 0) {
            ey_phase = initial_ey_phase;
            ex_phase = ey_phase + s.t * c.phase_step();
        } else {
            ex_phase = s.e * c.phase_step() + prev_ey_phase;
            ey_phase = ex_phase - s.t * c.phase_step();
        }
        // Keep the running reference bounded so long sequences stay exact.
        ex_phase = wrap_angle(ex_phase);
        ey_phase = wrap_angle(ey_phase);
        out.push_back({std::polar(c.radius(s.rx), ex_phase), std::polar(c.radius(s.ry), ey_phase)});
        prev_ey_phase = ey_phase;
    }
    return out;
}

/// Dimension values carried by a field pair (and the previous slot's E_y).
struct DimensionValues {
    double ex_mag = 0.0;
    double ey_mag = 0.0;
    double theta = 0.0;
    double eta = 0.0;
};

inline DimensionValues extract_dimensions(const DualPolSymbol &now, const cplx &ey_prev) {
    return {std::abs(now.x), std::abs(now.y), std::arg(now.x * std::conj(now.y)),
            std::arg(now.x * std::conj(ey_prev))};
}

namespace detail {

inline int nearest_ring(const RingPskConstellation &c, double mag) {
    int best = 0;
    double best_d = std::abs(mag - c.radius(0));
    for (int k = 1; k < c.n_rings(); ++k) {
        const double d = std::abs(mag - c.radius(k));
        if (d < best_d) {
            best = k;
            best_d = d;
        }
    }
    return best;
}

inline int nearest_phase(const RingPskConstellation &c, double phi) {
    int best = 0;
    double best_d = std::abs(std::remainder(phi, kTwoPi));
    for (int k = 1; k < c.n_phases(); ++k) {
        const double d = std::abs(std::remainder(phi - k * c.phase_step(), kTwoPi));
        if (d < best_d) {
            best = k;
            best_d = d;
        }
    }
    return best;
}

} // namespace detail

/// Hard decision per dimension. Ties go to the lower index.
inline SymbolIndices nearest_indices(const RingPskConstellation &c, double ex_mag, double ey_mag, double theta,
                                     double eta) {
    return {detail::nearest_ring(c, ex_mag), detail::nearest_ring(c, ey_mag), detail::nearest_phase(c, theta),
            detail::nearest_phase(c, eta)};
}

} // namespace stokesdd
