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
#include "stokesdd/constellation.hpp"
#include "stokesdd/gaussian_stats.hpp"

#include <array>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace stokesdd {

/// Below this |K_x[n]||K_y[n-1]| the delayed beat carries no phase and the
/// fourth dimension is erased.
inline constexpr double kDim4ErasureFloor = 1e-12;

struct Decision {
    SymbolIndices indices;
    DualPolSymbol k_now;                  // hypothesized noiseless received field
    std::vector<double> log_likelihoods;  // per hypothesis, only when requested
    bool eta_erased = false;
};

/// Index of the largest score, lowest index on ties.
inline std::size_t argmax_index(std::span<const double> scores) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i)
        if (scores[i] > scores[best]) best = i;
    return best;
}

/// Transmit fields of an (rx, ry, t) hypothesis with arg E_y = 0. The four
/// Stokes observables only see |E_x|, |E_y| and theta, so the absolute phase
/// is free.
inline DualPolSymbol stokes_hypothesis_field(const RingPskConstellation &c, int rx, int ry, int t) {
    return {std::polar(c.radius(rx), t * c.phase_step()), cplx(c.radius(ry), 0.0)};
}

/*
  Gaussian-approximated ML detector for |E_x|, |E_y| and theta.

  Every one of the N_r^2 N_p hypotheses is mapped through the channel and
  scored against the Gaussian with gaussian_stats_dims123 moments. Hypothesis
  order is h = (rx * N_r + ry) * N_p + t. When sigma2 == 0, or a covariance
  fails to factor, detection falls back to the nearest noiseless mean.
*/
class Dims123Detector {
public:
    Dims123Detector(const JonesChannel &ch, const RingPskConstellation &c) {
        const int nr = c.n_rings(), np = c.n_phases();
        hyps_.reserve(static_cast<std::size_t>(c.n_stokes_hypotheses()));
        bool ok = ch.sigma2 > 0.0;
        for (int rx = 0; rx < nr; ++rx)
            for (int ry = 0; ry < nr; ++ry)
                for (int t = 0; t < np; ++t) {
                    Hypothesis h;
                    h.indices = {rx, ry, t, 0};
                    h.k = ch.apply(stokes_hypothesis_field(c, rx, ry, t));
                    const Stats4 st = gaussian_stats_dims123(h.k.x, h.k.y, ch.sigma2);
                    h.mean = st.mean;
                    if (ok) {
                        h.density = GaussianLogDensity<4>::make(st);
                        ok = h.density.has_value();
                    }
                    hyps_.push_back(std::move(h));
                }
        use_density_ = ok;
    }

    bool uses_gaussian_density() const { return use_density_; }

    Decision detect(const Eigen::Vector4d &obs, bool keep_scores = false) const {
        std::size_t best = 0;
        double best_score = -std::numeric_limits<double>::infinity();
        Decision d;
        if (keep_scores) d.log_likelihoods.resize(hyps_.size());
        for (std::size_t i = 0; i < hyps_.size(); ++i) {
            const double s = score(hyps_[i], obs);
            if (keep_scores) d.log_likelihoods[i] = s;
            if (s > best_score) {
                best_score = s;
                best = i;
            }
        }
        d.indices = hyps_[best].indices;
        d.k_now = hyps_[best].k;
        return d;
    }

private:
    struct Hypothesis {
        SymbolIndices indices;
        DualPolSymbol k;
        Eigen::Vector4d mean;
        std::optional<GaussianLogDensity<4>> density;
    };

    double score(const Hypothesis &h, const Eigen::Vector4d &obs) const {
        if (use_density_) return (*h.density)(obs);
        return -(obs - h.mean).squaredNorm();
    }

    std::vector<Hypothesis> hyps_;
    bool use_density_ = false;
};

inline Decision detect_dims123(const Eigen::Vector4d &obs, const JonesChannel &ch, const RingPskConstellation &c,
                               bool keep_scores = false) {
    return Dims123Detector(ch, c).detect(obs, keep_scores);
}

// ---------------------------------------------------------------------------
// Fourth dimension
// ---------------------------------------------------------------------------

/// Coefficients of F_x[n]F_y*[n-1] on the beat products
/// (E_x E_y'*, E_y E_x'*, E_x E_x'*, E_y E_y'*), primes at slot n-1.
inline std::array<cplx, 4> beat_coefficients(const JonesChannel &ch) {
    const cplx ab = ch.a * ch.b;
    return {ch.a * ch.a, -ch.b * ch.b, -ab, ab};
}

/*
  Known context vector v such that the noiseless delayed beat is
  K_x[n]K_y*[n-1] = exp(i eta[n]) * (l^T v), with theta = arg(E_x E_y*):

    v = [ |E_x||E_y'|,
          |E_y||E_x'| exp(-i (theta + theta')),
          |E_x||E_x'| exp(-i theta'),
          |E_y||E_y'| exp(-i theta) ]
*/
inline std::array<cplx, 4> beat_context(const RingPskConstellation &c, const SymbolIndices &now,
                                        const SymbolIndices &prev) {
    const double ex = c.radius(now.rx), ey = c.radius(now.ry);
    const double exp_ = c.radius(prev.rx), eyp = c.radius(prev.ry);
    const double th = now.t * c.phase_step(), thp = prev.t * c.phase_step();
    return {cplx(ex * eyp, 0.0), std::polar(ey * exp_, -(th + thp)), std::polar(ex * exp_, -thp),
            std::polar(ey * eyp, -th)};
}

inline cplx beat_gain(const JonesChannel &ch, const RingPskConstellation &c, const SymbolIndices &now,
                      const SymbolIndices &prev) {
    const auto l = beat_coefficients(ch);
    const auto v = beat_context(c, now, prev);
    cplx acc{};
    for (std::size_t i = 0; i < 4; ++i) acc += l[i] * v[i];
    return acc;
}

/// (w5 + i w6) / (2 l^T v). Equals exp(i eta) without noise; empty when the
/// gain vanishes.
inline std::optional<cplx> normalized_beat(double w5, double w6, const cplx &gain) {
    if (!(std::abs(gain) > kDim4ErasureFloor)) return std::nullopt;
    return cplx(w5, w6) / (2.0 * gain);
}

/// Transmit fields of slots n-1 and n for the hypothesis eta, with
/// arg E_y[n-1] = 0.
inline std::pair<DualPolSymbol, DualPolSymbol> dim4_hypothesis_fields(const RingPskConstellation &c,
                                                                       const SymbolIndices &now,
                                                                       const SymbolIndices &prev, int eta) {
    const DualPolSymbol e_prev{std::polar(c.radius(prev.rx), prev.t * c.phase_step()), cplx(c.radius(prev.ry), 0.0)};
    const double ex_phase = eta * c.phase_step();
    const DualPolSymbol e_now{std::polar(c.radius(now.rx), ex_phase),
                              std::polar(c.radius(now.ry), ex_phase - now.t * c.phase_step())};
    return {e_prev, e_now};
}

struct Dim4Decision {
    std::optional<int> eta;  // empty on erasure
    std::vector<double> log_likelihoods;
    std::optional<cplx> closed_form;  // (w5 + i w6) / (2 l^T v), diagnostic
};

/*
  Successive detector for eta[n], given decided dims 1-3 of slot n and the
  full symbol of slot n-1. Each of the N_p candidates is turned into fields,
  pushed through the channel, and (w5, w6) is scored under
  gaussian_stats_dim4. The covariance does not depend on eta, so at
  sigma2 == 0 nearest-mean is the same rule.
*/
inline Dim4Decision detect_dim4(double w5, double w6, const SymbolIndices &now, const SymbolIndices &prev,
                                const JonesChannel &ch, const RingPskConstellation &c, bool keep_scores = false) {
    Dim4Decision out;
    out.closed_form = normalized_beat(w5, w6, beat_gain(ch, c, now, prev));

    const Eigen::Vector2d obs(w5, w6);
    std::vector<double> scores(static_cast<std::size_t>(c.n_phases()));
    for (int eta = 0; eta < c.n_phases(); ++eta) {
        const auto [e_prev, e_now] = dim4_hypothesis_fields(c, now, prev, eta);
        const cplx kx_now = ch.apply(e_now).x;
        const cplx ky_prev = ch.apply(e_prev).y;
        if (!(std::abs(kx_now) * std::abs(ky_prev) > kDim4ErasureFloor)) {
            if (keep_scores) out.log_likelihoods = std::move(scores);
            return out;
        }
        const Stats2 st = gaussian_stats_dim4(kx_now, ky_prev, ch.sigma2);
        const double var = st.cov(0, 0);
        const double d2 = (obs - st.mean).squaredNorm();
        scores[static_cast<std::size_t>(eta)] =
            var > 0.0 ? -0.5 * d2 / var - std::log(2.0 * std::numbers::pi * var) : -d2;
    }
    out.eta = static_cast<int>(argmax_index(scores));
    if (keep_scores) out.log_likelihoods = std::move(scores);
    return out;
}

} // namespace stokesdd
