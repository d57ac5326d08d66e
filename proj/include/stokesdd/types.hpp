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

#include <cmath>
#include <complex>
#include <numbers>

namespace stokesdd {

using cplx = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Complex field pair on the X and Y polarizations at one symbol slot.
/// Used for transmitted (E), received (F) and noiseless received (K) fields.
struct DualPolSymbol {
    cplx x{};
    cplx y{};

    double energy() const { return std::norm(x) + std::norm(y); }
};

/// Index tuple of one 4D symbol.
///   rx: ring of |E_x|, ry: ring of |E_y|,
///   t:  phase index of theta = arg(E_x[n] E_y*[n]),
///   e:  phase index of eta   = arg(E_x[n] E_y*[n-1]).
struct SymbolIndices {
    int rx = 0;
    int ry = 0;
    int t = 0;
    int e = 0;

    friend bool operator==(const SymbolIndices &, const SymbolIndices &) = default;
};

// Wraps an angle into (-pi, pi].
inline double wrap_angle(double phi) {
    double r = std::remainder(phi, kTwoPi);
    if (r <= -std::numbers::pi) r += kTwoPi;
    return r;
}

} // namespace stokesdd
