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

#include <span>
#include <string_view>
#include <vector>

namespace stokesdd {

/// Photocurrents of the two-hybrid receiver (unit responsivity).
///   w1 = |F_x[n]|^2            w2 = |F_y[n]|^2
///   w3 = 2 Re(F_x[n]F_y*[n])   w4 = 2 Im(F_x[n]F_y*[n])
///   w5 = 2 Re(F_x[n]F_y*[n-1]) w6 = 2 Im(F_x[n]F_y*[n-1])
struct FrontendOutputs {
    double w1 = 0, w2 = 0, w3 = 0, w4 = 0, w5 = 0, w6 = 0;
    std::size_t slot = 0;

    Eigen::Vector4d stokes() const { return {w1, w2, w3, w4}; }
    cplx delayed_beat() const { return {w5, w6}; }
};

/// Samples of the single-photodiode receiver variant. The hybrid outputs
/// carry the beat term on top of the intensities of both inputs.
struct ReducedFrontendOutputs {
    double w1 = 0, w2 = 0, w3p = 0, w4p = 0, w5p = 0, w6p = 0;
    std::size_t slot = 0;
};

enum class ReceiverVariant { full, reduced };

inline std::string_view to_string(ReceiverVariant v) { return v == ReceiverVariant::full ? "full" : "reduced"; }

inline FrontendOutputs frontend_full(const DualPolSymbol &f_now, const DualPolSymbol &f_prev, std::size_t slot = 0) {
    const cplx p = f_now.x * std::conj(f_now.y);
    const cplx q = f_now.x * std::conj(f_prev.y);
    return {std::norm(f_now.x), std::norm(f_now.y), 2.0 * p.real(), 2.0 * p.imag(), 2.0 * q.real(), 2.0 * q.imag(),
            slot};
}

inline ReducedFrontendOutputs frontend_reduced(const DualPolSymbol &f_now, const DualPolSymbol &f_prev,
                                               std::size_t slot = 0) {
    const FrontendOutputs w = frontend_full(f_now, f_prev, slot);
    const double same_slot = w.w1 + w.w2;
    const double cross_slot = std::norm(f_now.x) + std::norm(f_prev.y);
    return {w.w1, w.w2, same_slot + 0.5 * w.w3, same_slot + 0.5 * w.w4, cross_slot + 0.5 * w.w5,
            cross_slot + 0.5 * w.w6, slot};
}

/// Electrical-domain inverse of frontend_reduced. w2_prev is |F_y[n-1]|^2,
/// i.e. the w2 sample of the previous slot.
inline FrontendOutputs recover_full(const ReducedFrontendOutputs &r, double w2_prev) {
    const double same_slot = r.w1 + r.w2;
    const double cross_slot = r.w1 + w2_prev;
    return {r.w1,
            r.w2,
            2.0 * (r.w3p - same_slot),
            2.0 * (r.w4p - same_slot),
            2.0 * (r.w5p - cross_slot),
            2.0 * (r.w6p - cross_slot),
            r.slot};
}

/// Runs a received field sequence through the chosen receiver. The field
/// before slot 0 is taken as zero (nothing in the delay line).
inline std::vector<FrontendOutputs> detect_sequence(std::span<const DualPolSymbol> fields, ReceiverVariant variant) {
    std::vector<FrontendOutputs> out;
    out.reserve(fields.size());
    DualPolSymbol prev{};
    double w2_prev = 0.0;
    for (std::size_t n = 0; n < fields.size(); ++n) {
        if (variant == ReceiverVariant::full) {
            out.push_back(frontend_full(fields[n], prev, n));
        } else {
            const ReducedFrontendOutputs r = frontend_reduced(fields[n], prev, n);
            out.push_back(recover_full(r, w2_prev));
            w2_prev = r.w2;
        }
        prev = fields[n];
    }
    return out;
}

} // namespace stokesdd
