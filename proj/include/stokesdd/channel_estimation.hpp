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

#include "stokesdd/channel.hpp"
#include "stokesdd/frontend.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace stokesdd {

/// Training symbols [1, 0], [1, 1] and [i, 1].
inline const std::array<DualPolSymbol, 3> &training_pilots() {
    static const std::array<DualPolSymbol, 3> p{
        DualPolSymbol{cplx(1, 0), cplx(0, 0)},
        DualPolSymbol{cplx(1, 0), cplx(1, 0)},
        DualPolSymbol{cplx(0, 1), cplx(1, 0)},
    };
    return p;
}

/// Frontend samples for each pilot, one entry per noise realization.
using TrainingObservations = std::array<std::vector<FrontendOutputs>, 3>;

struct ChannelEstimate {
    cplx a_hat{1.0, 0.0};
    cplx b_hat{0.0, 0.0};
    double residual = 0.0;

    JonesChannel to_channel(double sigma2) const { return {a_hat, b_hat, sigma2}; }
};

class ChannelEstimationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Picks the representative of {(a, b), (-a, -b)} with Re(a) > 0, or
/// Re(a) == 0 and Im(a) >= 0, falling back to b when a vanishes. The sign is
/// the only channel parameter the photocurrents cannot see.
inline void fix_channel_sign(cplx &a, cplx &b) {
    const cplx &ref = std::abs(a) > 1e-9 ? a : b;
    const bool flip = ref.real() < 0.0 || (ref.real() == 0.0 && ref.imag() < 0.0);
    if (flip) {
        a = -a;
        b = -b;
    }
}

/// Max component error between two channels after sign alignment.
inline double sign_aligned_error(const cplx &a_hat, const cplx &b_hat, const cplx &a, const cplx &b) {
    const double plus = std::max(std::abs(a_hat - a), std::abs(b_hat - b));
    const double minus = std::max(std::abs(a_hat + a), std::abs(b_hat + b));
    return std::min(plus, minus);
}

/*
  Pilot-based estimate of (a, b).

  The beat w3 + i w4 is unbiased by noise, so the averaged beat products
  m_k = E[K_x K_y*] of the three pilots give

      [1, 0]:  m_1 = -a b
      [1, 1]:  m_2 = a^2 - b^2
      [i, 1]:  m_3 = i (a^2 + b^2)

  i.e. the symmetric rank-one matrix u u^T with u = (a, b). Normalizing its
  dominant column yields u up to a phase psi with u_hat_k = |u_k| e^{2 i psi};
  removing psi leaves the (a, b) / (-a, -b) ambiguity, pinned by
  fix_channel_sign. The residual is taken over the noise-unbiased averages
  (w1 - w2, w3, w4) of all pilots.
*/
inline ChannelEstimate estimate_channel(const TrainingObservations &training,
                                        double max_residual = std::numeric_limits<double>::infinity()) {
    std::array<cplx, 3> beat{};
    std::array<double, 3> imbalance{};
    for (std::size_t k = 0; k < 3; ++k) {
        const auto &obs = training[k];
        if (obs.empty()) throw std::invalid_argument("estimate_channel: pilot " + std::to_string(k) + " has no samples");
        cplx acc{};
        double diff = 0.0;
        for (const auto &w : obs) {
            acc += cplx(w.w3, w.w4);
            diff += w.w1 - w.w2;
        }
        const double n = static_cast<double>(obs.size());
        beat[k] = acc / (2.0 * n);
        imbalance[k] = diff / n;
    }

    const cplx i1(0.0, 1.0);
    const cplx a2 = 0.5 * (beat[1] - i1 * beat[2]);
    const cplx b2 = 0.5 * (-i1 * beat[2] - beat[1]);
    const cplx ab = -beat[0];

    const double n1 = std::sqrt(std::norm(a2) + std::norm(ab));
    const double n2 = std::sqrt(std::norm(ab) + std::norm(b2));
    cplx a, b;
    if (n1 == 0.0 && n2 == 0.0) throw ChannelEstimationError("estimate_channel: vanishing pilot beats");
    if (n1 >= n2) {
        a = a2 / n1;
        b = ab / n1;
        const cplx half = std::sqrt(a / std::abs(a));  // e^{i psi}, psi = arg(a_true)
        a /= half;
        b /= half;
    } else {
        a = ab / n2;
        b = b2 / n2;
        const cplx half = std::sqrt(b / std::abs(b));
        a /= half;
        b /= half;
    }
    const double norm = std::sqrt(std::norm(a) + std::norm(b));
    a /= norm;
    b /= norm;
    fix_channel_sign(a, b);

    ChannelEstimate est{a, b, 0.0};
    const JonesChannel fitted = est.to_channel(0.0);
    double r2 = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
        const DualPolSymbol kk = fitted.apply(training_pilots()[k]);
        const cplx pred_beat = kk.x * std::conj(kk.y);
        r2 += std::norm(2.0 * (beat[k] - pred_beat));
        const double d = imbalance[k] - (std::norm(kk.x) - std::norm(kk.y));
        r2 += d * d;
    }
    est.residual = std::sqrt(r2);
    if (!(est.residual <= max_residual))
        throw ChannelEstimationError("estimate_channel: residual " + std::to_string(est.residual) +
                                     " exceeds threshold " + std::to_string(max_residual));
    return est;
}

/// Training burst through the channel with caller-supplied unit noise:
/// `unit_noise` holds 2 * repeats complex values per pilot (x then y).
inline TrainingObservations simulate_training(const JonesChannel &ch, std::size_t repeats,
                                              std::span<const cplx> unit_noise) {
    if (unit_noise.size() < 6 * repeats) throw std::invalid_argument("simulate_training: not enough noise samples");
    TrainingObservations out;
    std::size_t pos = 0;
    for (std::size_t k = 0; k < 3; ++k) {
        out[k].reserve(repeats);
        const DualPolSymbol &p = training_pilots()[k];
        for (std::size_t r = 0; r < repeats; ++r) {
            const Propagated f = propagate_with_unit_noise(ch, p, unit_noise[pos], unit_noise[pos + 1]);
            pos += 2;
            out[k].push_back(frontend_full(f.noisy, f.noisy, r));
        }
    }
    return out;
}

template <std::uniform_random_bit_generator Engine>
TrainingObservations simulate_training(const JonesChannel &ch, std::size_t repeats, Engine &rng) {
    std::vector<cplx> noise(6 * repeats);
    for (auto &z : noise) z = standard_complex_normal(rng);
    return simulate_training(ch, repeats, noise);
}

} // namespace stokesdd
