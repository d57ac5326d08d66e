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

#include "stokesdd/rng.hpp"
#include "stokesdd/types.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace stokesdd {

/*
  Fiber polarization channel with preamplifier ASE noise:

      [F_x]   [  a    b  ] [E_x]   [z_x]
      [F_y] = [ -b*   a* ] [E_y] + [z_y]

  z_x, z_y are independent circularly symmetric complex Gaussians with
  variance 2 sigma2 each (sigma2 per real quadrature).
*/
struct JonesChannel {
    cplx a{1.0, 0.0};
    cplx b{0.0, 0.0};
    double sigma2 = 0.0;

    /// |a|^2 + |b|^2 - 1
    double unitarity_error() const { return std::norm(a) + std::norm(b) - 1.0; }

    DualPolSymbol apply(const DualPolSymbol &e) const {
        return {a * e.x + b * e.y, -std::conj(b) * e.x + std::conj(a) * e.y};
    }
};

/// Builds a unit-determinant channel from an explicit complex Gaussian pair.
inline JonesChannel channel_from_gaussian_pair(cplx g1, cplx g2, double sigma2) {
    if (!(sigma2 >= 0.0)) throw std::invalid_argument("sigma2 must be >= 0");
    const double norm = std::sqrt(std::norm(g1) + std::norm(g2));
    if (!(norm > 0.0)) throw std::invalid_argument("channel_from_gaussian_pair: zero draw");
    return {g1 / norm, g2 / norm, sigma2};
}

/// Haar-distributed channel over SU(2): normalized pair of complex Gaussians.
template <std::uniform_random_bit_generator Engine>
JonesChannel haar_random_channel(Engine &rng, double sigma2) {
    const cplx g1 = standard_complex_normal(rng);
    const cplx g2 = standard_complex_normal(rng);
    return channel_from_gaussian_pair(g1, g2, sigma2);
}

struct Propagated {
    DualPolSymbol noisy;
    DualPolSymbol noiseless;
};

/// Propagation with caller-supplied unit noise (unit variance per quadrature).
/// Lets one noise realization be reused across noise levels.
inline Propagated propagate_with_unit_noise(const JonesChannel &ch, const DualPolSymbol &e, const cplx &unit_x,
                                            const cplx &unit_y) {
    const DualPolSymbol k = ch.apply(e);
    const double sd = std::sqrt(ch.sigma2);
    return {{k.x + sd * unit_x, k.y + sd * unit_y}, k};
}

template <std::uniform_random_bit_generator Engine>
Propagated propagate(const JonesChannel &ch, const DualPolSymbol &e, Engine &rng) {
    const cplx ux = standard_complex_normal(rng);
    const cplx uy = standard_complex_normal(rng);
    return propagate_with_unit_noise(ch, e, ux, uy);
}

/// sigma2 for a given OSNR in dB, with unit average signal energy and
/// total noise energy 4 sigma2 per symbol.
inline double osnr_to_sigma2(double osnr_db) {
    if (!std::isfinite(osnr_db)) throw std::invalid_argument("osnr_db must be finite");
    return std::pow(10.0, -osnr_db / 10.0) / 4.0;
}

using StokesVector = Eigen::Vector4d;
using StokesMatrix = Eigen::Matrix4d;

/// (|E_x|^2, |E_y|^2, 2 Re(E_x E_y*), 2 Im(E_x E_y*))
inline StokesVector stokes_vector(const DualPolSymbol &e) {
    const cplx p = e.x * std::conj(e.y);
    return {std::norm(e.x), std::norm(e.y), 2.0 * p.real(), 2.0 * p.imag()};
}

/// Linear map taking the transmit Stokes vector to the noiseless receive one.
inline StokesMatrix stokes_matrix(const JonesChannel &ch) {
    const cplx a = ch.a, b = ch.b;
    const double aa = std::norm(a), bb = std::norm(b);
    const cplx abc = a * std::conj(b);
    const cplx ab = a * b;
    const cplx a2 = a * a, b2 = b * b;
    StokesMatrix m;
    // clang-format off
    m <<  aa,             bb,            abc.real(),            -abc.imag(),
          bb,             aa,           -abc.real(),             abc.imag(),
         -2.0 * ab.real(), 2.0 * ab.real(), a2.real() - b2.real(), -a2.imag() - b2.imag(),
         -2.0 * ab.imag(), 2.0 * ab.imag(), a2.imag() - b2.imag(),  a2.real() + b2.real();
    // clang-format on
    return m;
}

/// Change of basis from (|E_x|^2, |E_y|^2, S2, S3) to the conventional
/// (S0, S1, S2, S3) with S0 = |E_x|^2 + |E_y|^2 and S1 = |E_x|^2 - |E_y|^2.
inline Eigen::Matrix4d intensity_to_conventional_stokes() {
    Eigen::Matrix4d t;
    // clang-format off
    t << 1,  1, 0, 0,
         1, -1, 0, 0,
         0,  0, 1, 0,
         0,  0, 0, 1;
    // clang-format on
    return t;
}

/// The channel's action in the conventional Stokes basis: diag(1, R) with R in SO(3).
inline Eigen::Matrix4d conventional_stokes_matrix(const JonesChannel &ch) {
    const Eigen::Matrix4d t = intensity_to_conventional_stokes();
    return t * stokes_matrix(ch) * t.inverse();
}

} // namespace stokesdd
