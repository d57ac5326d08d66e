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

// Empirical photocurrent moments obtained by pushing sampled ASE noise
// through the frontend. Only the noise model and frontend_full are used, so
// the result can be checked against the closed-form GaussianStats.

#include "stokesdd/channel.hpp"
#include "stokesdd/constellation.hpp"
#include "stokesdd/frontend.hpp"
#include "stokesdd/gaussian_stats.hpp"
#include "stokesdd/rng.hpp"

#include <boost/random/sobol.hpp>

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

namespace stokesdd {

enum class NoiseSampler { monte_carlo, rqmc };

inline std::string_view to_string(NoiseSampler s) { return s == NoiseSampler::monte_carlo ? "mc" : "rqmc"; }

/// Source of pairs of unit complex Gaussians (unit variance per quadrature).
/// The RQMC variant maps a randomly shifted 4D Sobol sequence through
/// Box-Muller.
class UnitNoisePairs {
public:
    UnitNoisePairs(NoiseSampler kind, std::uint64_t seed) : kind_(kind), rng_(seed), sobol_(4) {
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        for (auto &s : shift_) s = u01(rng_);
    }

    std::array<cplx, 2> next() {
        if (kind_ == NoiseSampler::monte_carlo) return {standard_complex_normal(rng_), standard_complex_normal(rng_)};
        std::array<double, 4> u{};
        for (std::size_t d = 0; d < 4; ++d) {
            const double x = double(sobol_()) * 0x1p-64 + shift_[d];
            double f = x - std::floor(x);
            if (f <= 0.0) f = 0x1p-53;
            u[d] = f;
        }
        return {box_muller(u[0], u[1]), box_muller(u[2], u[3])};
    }

private:
    static cplx box_muller(double u1, double u2) { return std::polar(std::sqrt(-2.0 * std::log(u1)), kTwoPi * u2); }

    NoiseSampler kind_;
    Rng rng_;
    boost::random::sobol sobol_;
    std::array<double, 4> shift_{};
};

template <int N>
struct EmpiricalMoments {
    Eigen::Matrix<double, N, 1> mean = Eigen::Matrix<double, N, 1>::Zero();
    Eigen::Matrix<double, N, N> cov = Eigen::Matrix<double, N, N>::Zero();
    std::size_t n = 0;
};

namespace detail {

template <int N>
class MomentAccumulator {
public:
    void add(const Eigen::Matrix<double, N, 1> &x) {
        ++n_;
        const Eigen::Matrix<double, N, 1> d = x - mean_;
        mean_ += d / double(n_);
        m2_ += d * (x - mean_).transpose();
    }

    EmpiricalMoments<N> result() const {
        EmpiricalMoments<N> r;
        r.mean = mean_;
        r.n = n_;
        if (n_ > 1) r.cov = m2_ / double(n_ - 1);
        return r;
    }

private:
    std::size_t n_ = 0;
    Eigen::Matrix<double, N, 1> mean_ = Eigen::Matrix<double, N, 1>::Zero();
    Eigen::Matrix<double, N, N> m2_ = Eigen::Matrix<double, N, N>::Zero();
};

} // namespace detail

/// Moments of (w1..w4) for F = K + z over `draws` noise realizations.
inline EmpiricalMoments<4> sample_moments_dims123(const cplx &kx, const cplx &ky, double sigma2, std::size_t draws,
                                                  NoiseSampler sampler, std::uint64_t seed) {
    UnitNoisePairs noise(sampler, seed);
    const double sd = std::sqrt(sigma2);
    detail::MomentAccumulator<4> acc;
    for (std::size_t i = 0; i < draws; ++i) {
        const auto z = noise.next();
        const DualPolSymbol f{kx + sd * z[0], ky + sd * z[1]};
        acc.add(frontend_full(f, DualPolSymbol{}).stokes());
    }
    return acc.result();
}

/// Moments of (w5, w6) with independent noise on slot n and slot n-1.
inline EmpiricalMoments<2> sample_moments_dim4(const cplx &kx_now, const cplx &ky_prev, double sigma2,
                                               std::size_t draws, NoiseSampler sampler, std::uint64_t seed) {
    UnitNoisePairs noise(sampler, seed);
    const double sd = std::sqrt(sigma2);
    detail::MomentAccumulator<2> acc;
    for (std::size_t i = 0; i < draws; ++i) {
        const auto z = noise.next();
        const DualPolSymbol f_now{kx_now + sd * z[0], cplx{}};
        const DualPolSymbol f_prev{cplx{}, ky_prev + sd * z[1]};
        const FrontendOutputs w = frontend_full(f_now, f_prev);
        acc.add(Eigen::Vector2d(w.w5, w.w6));
    }
    return acc.result();
}

/// Largest relative deviation over the entries of `theory` whose magnitude
/// exceeds floor_fraction times the largest entry (mean and covariance
/// judged separately).
template <int N>
double max_relative_deviation(const GaussianStats<N> &theory, const EmpiricalMoments<N> &emp,
                              double floor_fraction = 0.05) {
    double worst = 0.0;
    auto scan = [&](const auto &t, const auto &e) {
        const double top = t.cwiseAbs().maxCoeff();
        if (!(top > 0.0)) return;
        for (int i = 0; i < t.rows(); ++i)
            for (int j = 0; j < t.cols(); ++j) {
                const double ref = std::abs(t(i, j));
                if (ref > floor_fraction * top) worst = std::max(worst, std::abs(e(i, j) - t(i, j)) / ref);
            }
    };
    scan(theory.mean, emp.mean);
    scan(theory.cov, emp.cov);
    return worst;
}

/// One random configuration for the moment check: a dims 1-3 field pair
/// and a dim-4 (K_x[n], K_y[n-1]) pair, both produced by a Haar channel
/// acting on random 2-ring / 4-PSK symbols, and sigma2 from an OSNR drawn
/// uniformly in [0, 25] dB.
struct OracleCase {
    cplx kx, ky;
    cplx kx_now, ky_prev;
    double sigma2 = 0.0;
    double osnr_db = 0.0;
};

inline std::vector<OracleCase> random_oracle_cases(std::size_t n, std::uint64_t seed) {
    Rng rng = make_stream(seed, {0x0c0ffeeULL});
    const RingPskConstellation c(2, 4);
    std::uniform_real_distribution<double> osnr(0.0, 25.0);
    std::vector<OracleCase> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const JonesChannel ch = haar_random_channel(rng, 0.0);
        std::array<SymbolIndices, 3> idx{random_indices(c, rng), random_indices(c, rng), random_indices(c, rng)};
        const auto tx = encode_sequence(c, idx);
        OracleCase oc;
        const DualPolSymbol k0 = ch.apply(tx[0]);
        oc.kx = k0.x;
        oc.ky = k0.y;
        oc.ky_prev = ch.apply(tx[1]).y;
        oc.kx_now = ch.apply(tx[2]).x;
        oc.osnr_db = osnr(rng);
        oc.sigma2 = osnr_to_sigma2(oc.osnr_db);
        out.push_back(oc);
    }
    return out;
}

} // namespace stokesdd
