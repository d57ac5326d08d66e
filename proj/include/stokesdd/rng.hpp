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

#include <cstdint>
#include <initializer_list>
#include <random>

namespace stokesdd {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives an independent stream seed from a master seed and a list of keys
/// (block index, experiment tag, ...). Results never depend on thread layout.
inline std::uint64_t stream_seed(std::uint64_t master, std::initializer_list<std::uint64_t> keys) {
    std::uint64_t h = splitmix64(master);
    for (auto k : keys) h = splitmix64(h ^ splitmix64(k + 0x632be59bd9b4e019ULL));
    return h;
}

inline Rng make_stream(std::uint64_t master, std::initializer_list<std::uint64_t> keys) {
    return Rng(stream_seed(master, keys));
}

/// Complex Gaussian with unit variance per real quadrature (E|g|^2 = 2).
template <std::uniform_random_bit_generator Engine>
cplx standard_complex_normal(Engine &rng) {
    std::normal_distribution<double> n01(0.0, 1.0);
    const double re = n01(rng);
    const double im = n01(rng);
    return {re, im};
}

} // namespace stokesdd
