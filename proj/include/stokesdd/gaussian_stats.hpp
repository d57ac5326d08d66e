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

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

namespace stokesdd {

/// Mean and covariance of a photocurrent block given a noiseless field
/// hypothesis.
template <int N>
struct GaussianStats {
    Eigen::Matrix<double, N, 1> mean;
    Eigen::Matrix<double, N, N> cov;
};

using Stats4 = GaussianStats<4>;
using Stats2 = GaussianStats<2>;

/*
  Moments of (w1, w2, w3, w4) for F = K + z, z ~ CN(0, 2 sigma2 I).
  With delta = arg(K_x K_y*), c = 4 s2 |K_x||K_y| cos(delta),
  s = 4 s2 |K_x||K_y| sin(delta):

      mean = [2 s2 + |K_x|^2, 2 s2 + |K_y|^2, 2|K_x||K_y| cos, 2|K_x||K_y| sin]

      cov  = [ 4s2^2 + 4s2|K_x|^2   0                     c    s ]
             [ 0                    4s2^2 + 4s2|K_y|^2    c    s ]
             [ c                    c                     d    0 ]
             [ s                    s                     0    d ]
      d = 8 s2^2 + 4 s2 (|K_x|^2 + |K_y|^2)
*/
inline Stats4 gaussian_stats_dims123(const cplx &kx, const cplx &ky, double sigma2) {
    const double s2 = sigma2, s4 = sigma2 * sigma2;
    const double mx = std::abs(kx), my = std::abs(ky);
    const double delta = std::arg(kx * std::conj(ky));
    const double cd = std::cos(delta), sd = std::sin(delta);
    const double c = 4.0 * s2 * mx * my * cd;
    const double s = 4.0 * s2 * mx * my * sd;
    const double d = 8.0 * s4 + 4.0 * s2 * (mx * mx + my * my);

    Stats4 st;
    st.mean << 2.0 * s2 + mx * mx, 2.0 * s2 + my * my, 2.0 * mx * my * cd, 2.0 * mx * my * sd;
    // clang-format off
    st.cov << 4.0 * s4 + 4.0 * s2 * mx * mx, 0.0,                           c,   s,
              0.0,                           4.0 * s4 + 4.0 * s2 * my * my, c,   s,
              c,                             c,                             d,   0.0,
              s,                             s,                             0.0, d;
    // clang-format on
    return st;
}

/// Moments of (w5, w6): mean 2|K_x[n]||K_y[n-1]| (cos, sin) alpha', covariance
/// (8 s2^2 + 4 s2 (|K_x[n]|^2 + |K_y[n-1]|^2)) I.
inline Stats2 gaussian_stats_dim4(const cplx &kx_now, const cplx &ky_prev, double sigma2) {
    const double mx = std::abs(kx_now), my = std::abs(ky_prev);
    const double alpha = std::arg(kx_now * std::conj(ky_prev));
    const double var = 8.0 * sigma2 * sigma2 + 4.0 * sigma2 * (mx * mx + my * my);
    Stats2 st;
    st.mean << 2.0 * mx * my * std::cos(alpha), 2.0 * mx * my * std::sin(alpha);
    st.cov = var * Eigen::Matrix2d::Identity();
    return st;
}

/// Precomputed Gaussian log-density. Empty when the covariance is not
/// positive definite.
template <int N>
class GaussianLogDensity {
public:
    static std::optional<GaussianLogDensity> make(const GaussianStats<N> &st) {
        Eigen::LLT<Eigen::Matrix<double, N, N>> llt(st.cov);
        if (llt.info() != Eigen::Success) return std::nullopt;
        double log_det = 0.0;
        for (int i = 0; i < N; ++i) {
            const double lii = llt.matrixLLT()(i, i);
            if (!(lii > 0.0) || !std::isfinite(lii)) return std::nullopt;
            log_det += 2.0 * std::log(lii);
        }
        GaussianLogDensity g;
        g.mean_ = st.mean;
        g.precision_ = llt.solve(Eigen::Matrix<double, N, N>::Identity());
        g.log_norm_ = -0.5 * log_det - 0.5 * N * std::log(2.0 * std::numbers::pi);
        return g;
    }

    double operator()(const Eigen::Matrix<double, N, 1> &x) const {
        const Eigen::Matrix<double, N, 1> d = x - mean_;
        return log_norm_ - 0.5 * d.dot(precision_ * d);
    }

private:
    Eigen::Matrix<double, N, 1> mean_;
    Eigen::Matrix<double, N, N> precision_;
    double log_norm_ = 0.0;
};

} // namespace stokesdd
