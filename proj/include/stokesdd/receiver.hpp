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

#include "stokesdd/detection.hpp"
#include "stokesdd/frontend.hpp"

#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace stokesdd {

enum class DetectionMode { genie, decision_directed };

inline std::string_view to_string(DetectionMode m) {
    return m == DetectionMode::genie ? "genie" : "decision-directed";
}

struct ReceiverOptions {
    DetectionMode mode = DetectionMode::decision_directed;
    SymbolIndices pilot{};               // known symbol of slot 0
    std::span<const SymbolIndices> truth; // required in genie mode
    bool keep_scores = false;
};

/*
  Successive receiver over one block. Slot 0 is the known pilot.

  Per slot: decide (rx, ry, t) from (w1..w4), then eta from (w5, w6) given
  those decisions and the previous slot's symbol. In decision-directed mode
  the previous symbol is the previous decision; in genie mode both the
  current dims 1-3 context and the previous symbol come from `truth`, which
  isolates the fourth dimension from error propagation. Dims 1-3 decisions
  are identical in both modes.
*/
inline std::vector<Decision> run_successive_receiver(std::span<const FrontendOutputs> frames, const JonesChannel &ch,
                                                     const RingPskConstellation &c, const ReceiverOptions &opt = {}) {
    if (opt.mode == DetectionMode::genie && opt.truth.size() < frames.size())
        throw std::invalid_argument("run_successive_receiver: genie mode needs the true index stream");
    if (!c.valid(opt.pilot)) throw std::invalid_argument("run_successive_receiver: pilot outside constellation");

    const Dims123Detector stokes(ch, c);
    std::vector<Decision> out;
    out.reserve(frames.size());
    for (std::size_t n = 0; n < frames.size(); ++n) {
        const FrontendOutputs &w = frames[n];
        Decision d = stokes.detect(w.stokes(), opt.keep_scores);
        if (n == 0) {
            d.indices.e = opt.pilot.e;
            out.push_back(std::move(d));
            continue;
        }
        SymbolIndices now = d.indices;
        SymbolIndices prev;
        if (opt.mode == DetectionMode::genie) {
            now = opt.truth[n];
            prev = opt.truth[n - 1];
        } else {
            prev = n == 1 ? opt.pilot : out[n - 1].indices;
        }
        const Dim4Decision e = detect_dim4(w.w5, w.w6, now, prev, ch, c);
        if (e.eta) {
            d.indices.e = *e.eta;
        } else {
            d.indices.e = 0;
            d.eta_erased = true;
        }
        out.push_back(std::move(d));
    }
    return out;
}

} // namespace stokesdd
